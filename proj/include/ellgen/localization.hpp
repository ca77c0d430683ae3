#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellgen/fixed_data.hpp"
#include "ellgen/genera.hpp"

namespace ellgen {

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> errors;       // "Code: message"; the first decides the exception class
    std::vector<std::string> error_codes;
    std::vector<std::string> warnings;
    std::vector<Rat> tangent_anomaly;      // sum m^2 d(m) per component
    std::vector<Rat> v_anomaly;            // sum n^2 d(n) - sum m^2 d(m) per component (V present)
    bool has_v = false;
    std::string summary() const;
};
ValidationReport validate(const ActionData& data);
// Throws the error class of the first failure.
void require_valid(const ActionData& data);

// Common value of sum n^2 d(n) - sum m^2 d(m) (V present) or of sum m^2 d(m)
// (no V, the WittenH convention). Throws InconsistentAnomaly.
int anomaly_index(const ActionData& data);
bool has_v_data(const ActionData& data);

using ResultSeries = Graded<QSeries<WRat>>;

struct GenusResult {
    Operator op;
    int N8 = 0;
    int w_resolution = 1;
    Ledger ledger;  // F = ledger * series
    ResultSeries series;
    GenTablePtr base_table;
    int base_cap = 0;
    int k = 0;
    int l = 0;
    std::string digest;
    std::vector<ResultSeries> components;  // per-component contributions (sign included)
};

// Sum over components of sign * fiber integral of the integrand; GENUS_THREADS
// bounds the number of worker threads.
GenusResult equivariant_character(const ActionData& data, const Operator& op, int N8);

// ch_g(Ind(D ⊗ W)) for an equivariant twisting bundle given per component
// (twists[i] are bundles over component i), to q^0.
Graded<WRat> twisted_dirac_character(const ActionData& data, const std::vector<std::vector<RootBundle>>& twists);

struct Witness {
    Mono mono;
    int q8 = 0;
    WRat value;
};
struct RigidConstant {
    Mono mono;
    int q8 = 0;
    Rat value;
};
struct RigidityVerdict {
    bool rigid = false;
    std::vector<RigidConstant> constants;
    std::optional<Witness> witness;
};
RigidityVerdict rigidity_check(const GenusResult& result);

struct PoleReport {
    bool holomorphic = true;       // every summed coefficient is a Laurent polynomial
    bool cancelled_entirely = true;  // and moreover w-free
    int max_den_degree_before = 0;
    int max_den_degree_after = 0;
    std::string detail;
};
PoleReport pole_cancellation_check(const std::vector<ResultSeries>& by_component);

// Degree-2p part, keyed by base monomial.
std::map<Mono, QSeries<WRat>> degree_component(const GenusResult& result, int two_p);

// F (theta-quotient normalization) per base monomial at (t, tau), by direct theta
// evaluation. Throws NearPole within 1e-6 of a pole, NonconvergentDomain.
std::map<Mono, cplx> evaluate_numeric(const ActionData& data, const Operator& op, cplx t, cplx tau, double eps);

// F from the truncated formal series: ledger * sum_n coeff_n(w) q^{n/8}.
std::map<Mono, cplx> evaluate_series(const GenusResult& result, cplx t, cplx tau);

std::string data_digest(const ActionData& data);

}  // namespace ellgen
