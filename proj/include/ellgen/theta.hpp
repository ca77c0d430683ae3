#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellgen/laurent.hpp"
#include "ellgen/ledger.hpp"
#include "ellgen/qseries.hpp"

namespace ellgen {

// theta, theta1, theta2, theta3 in the normalization where all four carry
// the factor c(q) = prod(1 - q^n); they are the classical
// jtheta 1, 2, 4, 3 with nome e^{i pi tau} and argument pi v.
enum class ThetaKind { Theta, Theta1, Theta2, Theta3 };

std::string theta_kind_name(ThetaKind k);
ThetaKind theta_kind_from_name(const std::string& s);

// Smallest resolution r (1 or 2) such that w^{m} is an integral power of w^{1/r}.
int resolution_for(const Rat& m);

// D^k theta_kind(v) at v = m t, D = (2 pi i)^{-1} d/dv, as a series in q^{1/8}
// with Laurent coefficients in u = w^{1/r}; M = r*m must be an integer.
// For ThetaKind::Theta the returned series is the rational part s with
// theta = -i s.
QSeries<WPoly> theta_derivative_series(ThetaKind kind, int M, int k, int N8);

struct ThetaSeries {
    QSeries<WRat> series;
    int w_resolution = 1;
    Ledger ledger;  // theta = ledger * series
};
ThetaSeries theta_formal(ThetaKind kind, const Rat& m, int N8);

struct ThetaTaylorStack {
    ThetaKind kind;
    Rat m;
    int w_resolution = 1;
    std::vector<QSeries<WPoly>> derivatives;  // entry k = D^k theta(mt), rational part
    Ledger normalization;
    bool order1_zero = false;  // Theta at m = 0 vanishes to first order
};
ThetaTaylorStack theta_taylor(ThetaKind kind, const Rat& m, int k_max, int N8, int w_resolution = 0);

// Ordinary Taylor coefficients theta^{(j)}(v, tau)/j!, j = 0..K.
// With reduce = false the product is summed directly (no lattice or modular
// reduction); that mode needs Im tau >= 0.3.
std::vector<cplx> theta_jet(ThetaKind kind, cplx v, cplx tau, int K, double eps = 1e-14, bool reduce = true);
cplx theta_numeric(ThetaKind kind, cplx t, cplx tau, double eps = 1e-14);
cplx theta_numeric_direct(ThetaKind kind, cplx t, cplx tau, double eps = 1e-14);

struct LawReport {
    bool pass = false;
    double max_discrepancy = 0;
    int samples = 0;
    std::string detail;
};

// theta_v(x + l(t + a tau + b)) = e^{-pi i (2lax + 2l^2 a t + l^2 a^2 tau)} theta_v(x + lt).
LawReport check_quasi_periodicity(ThetaKind kind, int l, int a, int b, int samples, double eps, uint64_t seed = 1);

enum class ModGen { S, T };
LawReport check_modular_ST(ThetaKind kind, ModGen g, int samples, double eps, uint64_t seed = 1);

}  // namespace ellgen
