#pragma once

#include <string>
#include <vector>

#include "ellgen/fixed_data.hpp"
#include "ellgen/graded.hpp"
#include "ellgen/laurent.hpp"
#include "ellgen/ledger.hpp"
#include "ellgen/qseries.hpp"
#include "ellgen/theta.hpp"

namespace ellgen {

enum class OperatorKind {
    DsThetaPrime,
    DThetaQ,
    DThetaMinusQ,
    DeltaVThetaPrime,
    DVThetaQ,
    DVThetaMinusQ,
    DVStarDifference,
    WittenH
};
enum class Normalization { Raw, VNormalized };

struct Operator {
    OperatorKind kind = OperatorKind::DsThetaPrime;
    Normalization norm = Normalization::Raw;
    friend bool operator==(const Operator& a, const Operator& b) { return a.kind == b.kind && a.norm == b.norm; }
};

bool needs_v(OperatorKind k);
bool is_v_normalizable(OperatorKind k);
// Theta function carried by the numerator (Theta for the D* kind); WittenH has none.
ThetaKind numerator_theta(OperatorKind k);

// CLI names: ds-theta-prime, d-theta-q, d-theta-minus-q, delta-v-theta-prime,
// dv-theta-q, dv-theta-minus-q, dv-star, witten-h; "-v" suffix for v-normalized.
std::string operator_name(const Operator& op);
Operator operator_from_name(const std::string& s);
std::vector<Operator> all_operators();

// F = ledger * ch_g(Ind(op)) relating the theta-quotient normalization of the
// F functions to the index character.
Ledger bridge_ledger(const Operator& op, int k, int l);

using QS = QSeries<WFrac>;
using Integrand = Graded<QS>;

// Â(TX) = prod (y/2)/sinh(y/2).
Graded<Rat> a_hat(const RootBundle& tangent, const GenTablePtr& table, int cap);

// sum_j w^{2m} e^{x_j}; the WPoly variable is u = w^{1/r}.
Graded<WPoly> chern_character(const RootBundle& bundle, const GenTablePtr& table, int cap, int w_resolution = 1);

// ch_g of the Witten element of op on a component, from the Λ_t / S_t
// generating products (no Â factors).
Integrand witten_element_ch(const Operator& op, const FixedComponent& c, int k, int l, int N8, int w_resolution);

// Â(TX^g) * Â_θ(N) on a component, without any twisting bundle.
Graded<WFrac> localization_kernel(const FixedComponent& c, int w_resolution);

// Â(TX^g) * Â_θ(N) * ch_g(W): the index-character integrand along the
// expansion path.
Integrand oracle_integrand(const Operator& op, const FixedComponent& c, int k, int l, int N8, int w_resolution);

// Bracketed theta-quotient integrand of the F function (theta-quotient normalization)
// together with the constants it carries: F_alpha = consts * payload.
struct QuotientIntegrand {
    Integrand payload;
    Ledger consts;
};
QuotientIntegrand theta_quotient_integrand(const Operator& op, const FixedComponent& c, int k, int l, int N8,
                                           int w_resolution);

// Rational series realizing a ledger with no 2π and an even power of i;
// throws LedgerMismatch otherwise.
QS ledger_rational_factor(const Ledger& e, int N8);

// The index-character integrand computed through the theta quotients.
Integrand closed_integrand(const Operator& op, const FixedComponent& c, int k, int l, int N8, int w_resolution);

struct OracleReport {
    bool equal = true;
    int N8 = 0;
    int components = 0;
    std::string detail;
};
// Compares closed_integrand with oracle_integrand on every component.
OracleReport oracle_expand_vs_closed(const Operator& op, const ActionData& data, int N8_small);

// Numeric counterpart of the bracketed integrand at (t, tau), with the
// constants applied: F_alpha before fiber integration.
Graded<cplx> numeric_integrand(const Operator& op, const FixedComponent& c, int k, int l, cplx t, cplx tau,
                               double eps);

// c(q)^e = prod (1 - q^n)^e as an exact rational series to q^{N8/8}.
QSeries<Rat> euler_power(int e, int N8);

}  // namespace ellgen
