#include "ellgen/theta.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ellgen/errors.hpp"

namespace ellgen {

namespace {
constexpr double kPi = 3.14159265358979323846;
const cplx I(0.0, 1.0);
}  // namespace

cplx Ledger::value(cplx tau) const {
    cplx v = std::pow(2 * kPi, two_pi) * std::pow(2.0, two) * std::pow(I, i);
    if (q8 != 0) v *= std::exp(2.0 * kPi * I * tau * (q8 / 8.0));
    if (c != 0) {
        cplx q = std::exp(2.0 * kPi * I * tau), qn = q, prod = 1.0;
        for (int n = 1; n < 2000 && std::abs(qn) > 1e-18; ++n, qn *= q) prod *= 1.0 - qn;
        v *= std::pow(prod, c);
    }
    return v;
}

std::string Ledger::to_string() const {
    std::ostringstream os;
    os << "(2pi)^" << two_pi << " i^" << i << " 2^" << two << " c(q)^" << c << " q^(" << q8 << "/8)";
    return os.str();
}

std::string theta_kind_name(ThetaKind k) {
    switch (k) {
        case ThetaKind::Theta: return "theta";
        case ThetaKind::Theta1: return "theta1";
        case ThetaKind::Theta2: return "theta2";
        case ThetaKind::Theta3: return "theta3";
    }
    return "?";
}

ThetaKind theta_kind_from_name(const std::string& s) {
    if (s == "theta") return ThetaKind::Theta;
    if (s == "theta1") return ThetaKind::Theta1;
    if (s == "theta2") return ThetaKind::Theta2;
    if (s == "theta3") return ThetaKind::Theta3;
    throw ParseError("unknown theta kind \"" + s + "\" (expected theta, theta1, theta2, theta3)");
}

int resolution_for(const Rat& m) { return rat_is_integer(m) ? 1 : 2; }

static int scaled_weight(const Rat& m, int r) {
    Rat M = m * r;
    if (!rat_is_integer(M)) throw InvalidDataset("weight " + rat_to_string(m) + " is not compatible with w-resolution " + std::to_string(r));
    return static_cast<int>(M.get_num().get_si());
}

// Sum forms, z^{1/2} = u^M:
//   theta3 = sum q^{n^2/2} z^n,  theta2 = sum (-1)^n q^{n^2/2} z^n,
//   theta1 = sum q^{(n+1/2)^2/2} z^{n+1/2},  theta = -i sum (-1)^n q^{(n+1/2)^2/2} z^{n+1/2}.
QSeries<WPoly> theta_derivative_series(ThetaKind kind, int M, int k, int N8) {
    QSeries<WPoly> s(N8);
    const bool half = kind == ThetaKind::Theta || kind == ThetaKind::Theta1;
    const bool alternating = kind == ThetaKind::Theta || kind == ThetaKind::Theta2;
    int nmax = static_cast<int>(std::sqrt(static_cast<double>(std::max(N8, 0)))) + 2;
    for (int n = -nmax; n <= nmax; ++n) {
        int e8 = half ? (2 * n + 1) * (2 * n + 1) : 4 * n * n;
        if (e8 > N8) continue;
        Rat mult = half ? Rat(2 * n + 1, 2) : Rat(n);
        Rat c = 1;
        for (int j = 0; j < k; ++j) c *= mult;
        if (alternating && (n % 2 != 0)) c = -c;
        int ue = half ? M * (2 * n + 1) : 2 * M * n;
        s.add_to(e8, WPoly::monomial(ue, c));
    }
    return s;
}

ThetaSeries theta_formal(ThetaKind kind, const Rat& m, int N8) {
    ThetaSeries out;
    out.w_resolution = resolution_for(m);
    int M = scaled_weight(m, out.w_resolution);
    out.series = theta_derivative_series(kind, M, 0, N8).map([](const WPoly& p) { return WRat(p); });
    if (kind == ThetaKind::Theta) out.ledger = Ledger::of_i(-1);
    return out;
}

ThetaTaylorStack theta_taylor(ThetaKind kind, const Rat& m, int k_max, int N8, int w_resolution) {
    ThetaTaylorStack st;
    st.kind = kind;
    st.m = m;
    st.w_resolution = w_resolution > 0 ? w_resolution : resolution_for(m);
    int M = scaled_weight(m, st.w_resolution);
    for (int k = 0; k <= k_max; ++k) st.derivatives.push_back(theta_derivative_series(kind, M, k, N8));
    if (kind == ThetaKind::Theta) st.normalization = Ledger::of_i(-1);
    st.order1_zero = kind == ThetaKind::Theta && m == 0;
    return st;
}

// ---------------- numeric ----------------

namespace {

using Jet = std::vector<cplx>;

Jet jet_mul(const Jet& a, const Jet& b) {
    Jet r(a.size(), 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// exp(p(y)) for a jet p.
Jet jet_exp(const Jet& p) {
    Jet e(p.size(), 0.0);
    e[0] = std::exp(p[0]);
    for (size_t n = 1; n < p.size(); ++n) {
        cplx acc = 0.0;
        for (size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * p[k] * e[n - k];
        e[n] = acc / static_cast<double>(n);
    }
    return e;
}

Jet linear_jet(cplx c0, cplx c1, int K) {
    Jet p(K + 1, 0.0);
    p[0] = c0;
    if (K >= 1) p[1] = c1;
    return p;
}

int theta_index_sign_T(ThetaKind k) { return (k == ThetaKind::Theta || k == ThetaKind::Theta2) ? -1 : 1; }
int theta_index_sign_one(ThetaKind k) { return (k == ThetaKind::Theta || k == ThetaKind::Theta1) ? -1 : 1; }

// Product formula at v with |Im v| moderate; Im tau >= 0.3 assumed by callers.
Jet product_jet(ThetaKind kind, cplx v, cplx tau, int K, double eps) {
    const cplx q = std::exp(2.0 * kPi * I * tau);
    const double aq = std::abs(q);
    Jet z = jet_exp(linear_jet(2.0 * kPi * I * v, 2.0 * kPi * I, K));
    Jet zi = jet_exp(linear_jet(-2.0 * kPi * I * v, -2.0 * kPi * I, K));
    Jet acc(K + 1, 0.0);
    const bool half_shift = kind == ThetaKind::Theta2 || kind == ThetaKind::Theta3;
    if (half_shift) {
        acc[0] = 1.0;
    } else {
        // 2 q^{1/8} sin(pi v) or 2 q^{1/8} cos(pi v), expanded in y.
        cplx q18 = std::exp(2.0 * kPi * I * tau / 8.0);
        cplx a = kPi * v;
        double pj = 1.0, fact = 1.0;
        for (int j = 0; j <= K; ++j) {
            if (j > 0) {
                pj *= kPi;
                fact *= j;
            }
            double shift = j * kPi / 2 + (kind == ThetaKind::Theta1 ? kPi / 2 : 0.0);
            acc[j] = 2.0 * q18 * std::sin(a + shift) * (pj / fact);
        }
    }
    const double sgn = (kind == ThetaKind::Theta || kind == ThetaKind::Theta2) ? -1.0 : 1.0;
    const double R = std::max({1.0, std::abs(z[0]), std::abs(zi[0])});
    // Taylor coefficients of log(1 - x e^{2 pi i y}) grow like (2 pi)^j / j!.
    const double tol = eps * 1e-4 * (1.0 - aq) / std::exp(2 * kPi);
    cplx qn = q;
    for (int n = 1; n < 100000; ++n, qn *= q) {
        cplx qa = half_shift ? std::exp(2.0 * kPi * I * tau * (n - 0.5)) : qn;
        Jet f1(K + 1, 0.0), f2(K + 1, 0.0), f0(K + 1, 0.0);
        f0[0] = 1.0 - qn;
        for (int j = 0; j <= K; ++j) {
            f1[j] = sgn * qa * z[j];
            f2[j] = sgn * qa * zi[j];
        }
        f1[0] += 1.0;
        f2[0] += 1.0;
        acc = jet_mul(jet_mul(acc, f0), jet_mul(f1, f2));
        if (std::abs(qa) * aq * R < tol) break;
    }
    return acc;
}

Jet theta_jet_impl(ThetaKind kind, cplx v, cplx tau, int K, double eps, bool reduce, int depth) {
    if (!(tau.imag() > 0)) throw NonconvergentDomain("Im tau must be positive");
    if (depth > 64) throw NonconvergentDomain("modular reduction did not terminate");
    if (tau.imag() < 0.3) {
        if (!reduce) throw NonconvergentDomain("direct product evaluation needs Im tau >= 0.3");
        // T-shift to |Re tau| <= 1/2.
        double n = std::round(tau.real());
        cplx t1 = tau - n;
        int ni = static_cast<int>(n);
        ThetaKind k1 = kind;
        cplx pref = 1.0;
        if (kind == ThetaKind::Theta || kind == ThetaKind::Theta1) {
            pref = std::exp(I * kPi * (n / 4.0));
        } else if (ni % 2 != 0) {
            k1 = kind == ThetaKind::Theta2 ? ThetaKind::Theta3 : ThetaKind::Theta2;
        }
        // S: theta_k(v, t1) = C (t1/i)^{-1/2} e^{-pi i v^2 / t1} theta_k'(v/t1, -1/t1).
        ThetaKind k2 = k1;
        cplx C = 1.0;
        switch (k1) {
            case ThetaKind::Theta: C = I; break;
            case ThetaKind::Theta1: k2 = ThetaKind::Theta2; break;
            case ThetaKind::Theta2: k2 = ThetaKind::Theta1; break;
            case ThetaKind::Theta3: break;
        }
        Jet inner = theta_jet_impl(k2, v / t1, -1.0 / t1, K, eps, reduce, depth + 1);
        cplx s = 1.0 / t1, sj = 1.0;
        for (int j = 0; j <= K; ++j, sj *= s) inner[j] *= sj;
        Jet quad(K + 1, 0.0);
        quad[0] = -I * kPi * v * v / t1;
        if (K >= 1) quad[1] = -2.0 * I * kPi * v / t1;
        if (K >= 2) quad[2] = -I * kPi / t1;
        Jet g = jet_mul(jet_exp(quad), inner);
        cplx c = pref * C / std::sqrt(t1 / I);
        for (auto& x : g) x *= c;
        return g;
    }
    if (!reduce) return product_jet(kind, v, tau, K, eps);
    // Lattice reduction: v = v2 + m1 + n tau with |Im v2| <= Im tau / 2.
    double nshift = std::round(v.imag() / tau.imag());
    cplx v1 = v - nshift * tau;
    double m1 = std::round(v1.real());
    cplx v2 = v1 - m1;
    Jet base = product_jet(kind, v2, tau, K, eps);
    int ni = static_cast<int>(nshift), mi = static_cast<int>(m1);
    double sign = 1.0;
    if (mi % 2 != 0) sign *= theta_index_sign_one(kind);
    if (ni % 2 != 0) sign *= theta_index_sign_T(kind);
    // theta(v1 + n tau + y) = eps^n q^{-n^2/2} e^{-2 pi i n (v1 + y)} theta(v1 + y)
    Jet f = jet_exp(linear_jet(-I * kPi * tau * (nshift * nshift) - 2.0 * kPi * I * nshift * v1, -2.0 * kPi * I * nshift, K));
    Jet r = jet_mul(f, base);
    for (auto& x : r) x *= sign;
    return r;
}

}  // namespace

std::vector<cplx> theta_jet(ThetaKind kind, cplx v, cplx tau, int K, double eps, bool reduce) {
    return theta_jet_impl(kind, v, tau, K, eps, reduce, 0);
}

cplx theta_numeric(ThetaKind kind, cplx t, cplx tau, double eps) { return theta_jet(kind, t, tau, 0, eps)[0]; }

cplx theta_numeric_direct(ThetaKind kind, cplx t, cplx tau, double eps) {
    return theta_jet(kind, t, tau, 0, eps, false)[0];
}

// ---------------- law checkers ----------------

namespace {

double discrepancy(cplx lhs, cplx rhs) {
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace

LawReport check_quasi_periodicity(ThetaKind kind, int l, int a, int b, int samples, double eps, uint64_t seed) {
    if (a % 2 != 0 || b % 2 != 0) throw InvalidDataset("quasi-periodicity check needs even a, b");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-0.4, 0.4), ut(-0.3, 0.3), utr(-0.5, 0.5), uti(0.5, 1.2);
    LawReport rep;
    for (int s = 0; s < samples; ++s) {
        cplx x(ux(rng), 0.3 * ut(rng)), t(ut(rng), 0.2 * ut(rng)), tau(utr(rng), uti(rng));
        cplx lhs = theta_numeric_direct(kind, x + double(l) * (t + double(a) * tau + double(b)), tau, eps);
        cplx ph = -I * kPi * (2.0 * l * a * x + 2.0 * l * l * a * t + double(l * l * a * a) * tau);
        cplx rhs = std::exp(ph) * theta_numeric_direct(kind, x + double(l) * t, tau, eps);
        rep.max_discrepancy = std::max(rep.max_discrepancy, discrepancy(lhs, rhs));
        ++rep.samples;
    }
    rep.pass = rep.max_discrepancy < eps;
    rep.detail = theta_kind_name(kind) + " l=" + std::to_string(l) + " a=" + std::to_string(a) + " b=" + std::to_string(b);
    return rep;
}

LawReport check_modular_ST(ThetaKind kind, ModGen g, int samples, double eps, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(-0.4, 0.4), utr(-0.5, 0.5), uti(0.5, 1.0);
    LawReport rep;
    for (int s = 0; s < samples; ++s) {
        cplx t(ut(rng), 0.25 * ut(rng)), tau(utr(rng), uti(rng));
        cplx lhs, rhs;
        if (g == ModGen::T) {
            lhs = theta_numeric_direct(kind, t, tau + 1.0, eps);
            switch (kind) {
                case ThetaKind::Theta:
                case ThetaKind::Theta1: rhs = std::exp(I * kPi / 4.0) * theta_numeric_direct(kind, t, tau, eps); break;
                case ThetaKind::Theta2: rhs = theta_numeric_direct(ThetaKind::Theta3, t, tau, eps); break;
                case ThetaKind::Theta3: rhs = theta_numeric_direct(ThetaKind::Theta2, t, tau, eps); break;
            }
        } else {
            lhs = theta_numeric_direct(kind, t / tau, -1.0 / tau, eps);
            cplx f = std::sqrt(tau / I) * std::exp(I * kPi * t * t / tau);
            switch (kind) {
                case ThetaKind::Theta: rhs = f / I * theta_numeric_direct(ThetaKind::Theta, t, tau, eps); break;
                case ThetaKind::Theta1: rhs = f * theta_numeric_direct(ThetaKind::Theta2, t, tau, eps); break;
                case ThetaKind::Theta2: rhs = f * theta_numeric_direct(ThetaKind::Theta1, t, tau, eps); break;
                case ThetaKind::Theta3: rhs = f * theta_numeric_direct(ThetaKind::Theta3, t, tau, eps); break;
            }
        }
        rep.max_discrepancy = std::max(rep.max_discrepancy, discrepancy(lhs, rhs));
        ++rep.samples;
    }
    rep.pass = rep.max_discrepancy < eps;
    rep.detail = theta_kind_name(kind) + (g == ModGen::S ? " under S" : " under T");
    return rep;
}

}  // namespace ellgen
