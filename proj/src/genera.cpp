#include "ellgen/genera.hpp"

#include <algorithm>

#include "ellgen/errors.hpp"

namespace ellgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

int scaled(const Rat& m, int r) {
    Rat M = m * r;
    if (!rat_is_integer(M)) throw InvalidDataset("weight " + rat_to_string(m) + " needs w-resolution above " + std::to_string(r));
    return static_cast<int>(M.get_num().get_si());
}

Integrand lift(const Graded<Rat>& g) {
    return g.map([](const Rat& r) { return QS::constant(WFrac(r)); });
}
Integrand lift(const Graded<WFrac>& g, int q8 = 0, int N8 = QS::kExact) {
    return g.map([&](const WFrac& w) { return QS::monomial(q8, w, N8); });
}
Integrand constant(const FixedComponent& c, const QS& s) { return Integrand::constant(c.table, c.cap, s); }

QS to_qs(const QSeries<WPoly>& s, const Rat& scale = 1) {
    return s.map([&](const WPoly& p) { return WFrac(p * scale); });
}
QS to_qs(const QSeries<Rat>& s) {
    return s.map([](const Rat& r) { return WFrac(r); });
}

QS qs_pow(const QS& s, int e) {
    QS base = s;
    if (e < 0) {
        base = series_invert(s);
        e = -e;
    }
    QS r = QS::constant(WFrac(1));
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
}

// Jet of theta_kind(m t + y) in the topological root Y = 2 pi i y; with
// drop_order1 the jet of s(Y)/Y (Theta at m = 0 only).
Integrand theta_factor(ThetaKind kind, const Rat& m, const Graded<Rat>& root, int N8, int r, bool drop_order1 = false) {
    const int off = drop_order1 ? 1 : 0;
    const int K = root.cap() / 2 + off;
    ThetaTaylorStack st = theta_taylor(kind, m, K, N8, r);
    std::vector<QS> jet;
    for (int j = 0; j + off <= K; ++j) jet.push_back(to_qs(st.derivatives[j + off], 1 / factorial(j + off)));
    return compose(jet, lift(root));
}

// u^{u_exp} exp(s x)
Graded<WFrac> twisted_exp(const Graded<Rat>& x, const Rat& s, int u_exp) {
    Graded<Rat> e = graded_exp(x * s);
    WFrac mono(WPoly::monomial(u_exp));
    return e.map([&](const Rat& c) { return mono * WFrac(c); });
}

template <class C>
Graded<WFrac> w_constant(const Graded<C>& like, const WFrac& w) {
    return Graded<WFrac>::constant(like.table(), like.cap(), w);
}

struct Line {
    Graded<Rat> root;
    int M;  // r * weight
};

std::vector<Line> lines_of(const std::vector<RootBundle>& bundles, int r) {
    std::vector<Line> out;
    for (const auto& b : bundles)
        for (const auto& x : b.roots) out.push_back({x, scaled(b.weight, r)});
    return out;
}

// Characters e^rho of the complexification: both signs of every line.
std::vector<Graded<WFrac>> complexified(const std::vector<Line>& lines) {
    std::vector<Graded<WFrac>> out;
    for (const auto& ln : lines) {
        out.push_back(twisted_exp(ln.root, 1, 2 * ln.M));
        out.push_back(twisted_exp(ln.root, -1, -2 * ln.M));
    }
    return out;
}

// Λ_t family: t = sign * q^{a/8} for a = first, first + 8, ...
struct LambdaSeq {
    int first;
    int sign;
};
LambdaSeq lambda_seq(OperatorKind k) {
    switch (k) {
        case OperatorKind::DsThetaPrime:
        case OperatorKind::DeltaVThetaPrime: return {8, 1};
        case OperatorKind::DThetaQ:
        case OperatorKind::DVThetaQ: return {4, -1};
        case OperatorKind::DThetaMinusQ:
        case OperatorKind::DVThetaMinusQ: return {4, 1};
        case OperatorKind::DVStarDifference: return {8, -1};
        case OperatorKind::WittenH: break;
    }
    return {0, 0};
}

}  // namespace

bool needs_v(OperatorKind k) {
    return k == OperatorKind::DeltaVThetaPrime || k == OperatorKind::DVThetaQ || k == OperatorKind::DVThetaMinusQ ||
           k == OperatorKind::DVStarDifference;
}

bool is_v_normalizable(OperatorKind k) { return needs_v(k); }

ThetaKind numerator_theta(OperatorKind k) {
    switch (k) {
        case OperatorKind::DsThetaPrime:
        case OperatorKind::DeltaVThetaPrime: return ThetaKind::Theta1;
        case OperatorKind::DThetaQ:
        case OperatorKind::DVThetaQ: return ThetaKind::Theta2;
        case OperatorKind::DThetaMinusQ:
        case OperatorKind::DVThetaMinusQ: return ThetaKind::Theta3;
        case OperatorKind::DVStarDifference:
        case OperatorKind::WittenH: return ThetaKind::Theta;
    }
    return ThetaKind::Theta;
}

std::string operator_name(const Operator& op) {
    std::string s;
    switch (op.kind) {
        case OperatorKind::DsThetaPrime: s = "ds-theta-prime"; break;
        case OperatorKind::DThetaQ: s = "d-theta-q"; break;
        case OperatorKind::DThetaMinusQ: s = "d-theta-minus-q"; break;
        case OperatorKind::DeltaVThetaPrime: s = "delta-v-theta-prime"; break;
        case OperatorKind::DVThetaQ: s = "dv-theta-q"; break;
        case OperatorKind::DVThetaMinusQ: s = "dv-theta-minus-q"; break;
        case OperatorKind::DVStarDifference: s = "dv-star"; break;
        case OperatorKind::WittenH: s = "witten-h"; break;
    }
    if (op.norm == Normalization::VNormalized) s += "-v";
    return s;
}

std::vector<Operator> all_operators() {
    std::vector<Operator> ops;
    for (auto k : {OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ,
                   OperatorKind::DeltaVThetaPrime, OperatorKind::DVThetaQ, OperatorKind::DVThetaMinusQ,
                   OperatorKind::DVStarDifference, OperatorKind::WittenH}) {
        ops.push_back({k, Normalization::Raw});
        if (is_v_normalizable(k)) ops.push_back({k, Normalization::VNormalized});
    }
    return ops;
}

Operator operator_from_name(const std::string& s) {
    for (const auto& op : all_operators())
        if (operator_name(op) == s) return op;
    throw ParseError("unknown operator \"" + s + "\"");
}

Ledger bridge_ledger(const Operator& op, int k, int l) {
    if (op.norm == Normalization::VNormalized) {
        switch (op.kind) {
            case OperatorKind::DeltaVThetaPrime: return Ledger::of_two(-l);
            case OperatorKind::DVStarDifference: return Ledger::of_i(2 * l);
            default: return Ledger{};
        }
    }
    switch (op.kind) {
        case OperatorKind::DsThetaPrime:
        case OperatorKind::WittenH: return Ledger{};
        case OperatorKind::DThetaQ:
        case OperatorKind::DThetaMinusQ: return Ledger::of_q8(-k);
        case OperatorKind::DeltaVThetaPrime: return Ledger::of_c(l - k) * Ledger::of_q8(l - k);
        case OperatorKind::DVThetaQ:
        case OperatorKind::DVThetaMinusQ: return Ledger::of_c(l - k) * Ledger::of_q8(-k);
        case OperatorKind::DVStarDifference: return Ledger::of_i(2 * l) * Ledger::of_c(l - k) * Ledger::of_q8(l - k);
    }
    return Ledger{};
}

QSeries<Rat> euler_power(int e, int N8) {
    QSeries<Rat> r = QSeries<Rat>::constant(1, N8);
    for (int n = 1; 8 * n <= N8; ++n) {
        QSeries<Rat> f(N8);
        if (e >= 0) {
            f = QSeries<Rat>::constant(1, N8);
            f.add_to(8 * n, -1);
        } else {
            for (int j = 0; 8 * n * j <= N8; ++j) f.add_to(8 * n * j, 1);
        }
        for (int i = 0; i < std::abs(e); ++i) r = r * f;
    }
    return r;
}

Graded<Rat> a_hat(const RootBundle& tangent, const GenTablePtr& table, int cap) {
    Graded<Rat> r = Graded<Rat>::constant(table, cap, 1);
    // (y/2)/sinh(y/2) = 1 / sum (y/2)^{2j} / (2j+1)!
    std::vector<Rat> jet(cap + 1, Rat(0));
    for (int j = 0; 2 * j <= cap; ++j) {
        Rat p = 1;
        for (int i = 0; i < 2 * j; ++i) p /= 2;
        jet[2 * j] = p / factorial(2 * j + 1);
    }
    for (const auto& y : tangent.roots) r *= graded_inverse(compose(jet, y));
    return r;
}

Graded<WPoly> chern_character(const RootBundle& bundle, const GenTablePtr& table, int cap, int w_resolution) {
    Graded<WPoly> r(table, cap);
    int M = scaled(bundle.weight, w_resolution);
    for (int j = 0; j < bundle.rank; ++j) {
        Graded<Rat> e = j < static_cast<int>(bundle.roots.size()) ? graded_exp(bundle.roots[j])
                                                                  : Graded<Rat>::constant(table, cap, 1);
        r += e.map([&](const Rat& c) { return WPoly::monomial(2 * M, c); });
    }
    return r;
}

Integrand witten_element_ch(const Operator& op, const FixedComponent& c, int k, int l, int N8, int r) {
    const bool vkind = needs_v(op.kind);
    std::vector<Line> tangent_lines;
    for (const auto& y : c.tangent.roots) tangent_lines.push_back({y, 0});
    std::vector<Line> tx_lines = tangent_lines;
    for (const auto& ln : lines_of(c.normals, r)) tx_lines.push_back(ln);
    std::vector<Line> v_lines = lines_of(c.vbundles, r);

    Integrand acc = constant(c, QS::constant(WFrac(1), N8));
    auto multiply_q0 = [&](const Graded<WFrac>& g) { acc = acc * lift(g, 0, N8); };

    // spinor factors
    if (op.kind == OperatorKind::DsThetaPrime) {
        for (const auto& ln : tx_lines) multiply_q0(twisted_exp(ln.root, Rat(1, 2), ln.M) + twisted_exp(ln.root, Rat(-1, 2), -ln.M));
    } else if (op.kind == OperatorKind::DeltaVThetaPrime) {
        for (const auto& ln : v_lines) multiply_q0(twisted_exp(ln.root, Rat(1, 2), ln.M) + twisted_exp(ln.root, Rat(-1, 2), -ln.M));
    } else if (op.kind == OperatorKind::DVStarDifference) {
        for (const auto& ln : v_lines) multiply_q0(twisted_exp(ln.root, Rat(-1, 2), -ln.M) - twisted_exp(ln.root, Rat(1, 2), ln.M));
    }

    // Λ_t products
    if (op.kind != OperatorKind::WittenH) {
        LambdaSeq seq = lambda_seq(op.kind);
        auto chars = complexified(vkind ? v_lines : tx_lines);
        for (int a = seq.first; a <= N8; a += 8) {
            for (const auto& e : chars) {
                Integrand f = constant(c, QS::constant(WFrac(1), N8)) + lift(e * WFrac(Rat(seq.sign)), a, N8);
                acc = acc * f;
            }
            if (op.norm == Normalization::VNormalized) {
                // divide by (1 + t)^{2l}
                QSeries<Rat> g(N8);
                for (int j = 0; a * j <= N8; ++j) g.add_to(a * j, (seq.sign == 1 && j % 2 == 1) ? -1 : 1);
                QS gq = to_qs(g);
                for (int i = 0; i < 2 * l; ++i) acc = acc * gq;
            }
        }
    }

    // S_{q^n}(TX) as explicit geometric sums
    auto chars = complexified(tx_lines);
    for (int a = 8; a <= N8; a += 8) {
        for (const auto& e : chars) {
            Integrand f = constant(c, QS::constant(WFrac(1), N8));
            Graded<WFrac> p = w_constant(e, WFrac(1));
            for (int j = 1; a * j <= N8; ++j) {
                p = p * e;
                f = f + lift(p, a * j, N8);
            }
            acc = acc * f;
        }
    }
    if (op.kind == OperatorKind::WittenH || op.norm == Normalization::VNormalized) acc = acc * to_qs(euler_power(2 * k, N8));
    return acc;
}

Graded<WFrac> localization_kernel(const FixedComponent& c, int r) {
    Graded<WFrac> acc = a_hat(c.tangent, c.table, c.cap).map([](const Rat& x) { return WFrac(x); });
    for (const auto& ln : lines_of(c.normals, r)) {
        if (ln.M == 0) throw ZeroWeightNormalBundle("normal bundle of weight 0 on component " + c.name);
        Graded<WFrac> den = twisted_exp(ln.root, 1, 2 * ln.M) - w_constant(ln.root, WFrac(1));
        acc = acc * twisted_exp(ln.root, Rat(1, 2), ln.M) * graded_inverse(den);
    }
    return acc;
}

Integrand oracle_integrand(const Operator& op, const FixedComponent& c, int k, int l, int N8, int r) {
    return lift(localization_kernel(c, r)) * witten_element_ch(op, c, k, l, N8, r);
}

QuotientIntegrand theta_quotient_integrand(const Operator& op, const FixedComponent& c, int k, int l, int N8, int r) {
    for (const auto& b : c.normals)
        if (b.weight == 0) throw ZeroWeightNormalBundle("normal bundle of weight 0 on component " + c.name);
    QuotientIntegrand out;
    Ledger& consts = out.consts;
    Integrand acc = constant(c, QS::constant(WFrac(1), N8));
    const ThetaKind num = numerator_theta(op.kind);
    const QS s1 = to_qs(theta_derivative_series(ThetaKind::Theta, 0, 1, N8));

    if (!needs_v(op.kind) && op.kind != OperatorKind::WittenH) {
        for (const auto& y : c.tangent.roots) {
            // 2 pi y = -i Y and theta(y) = -i Y sigma(Y)
            consts *= Ledger::of_i(-1) * Ledger::of_i(1);
            acc = acc * theta_factor(num, 0, y, N8, r) * graded_inverse(theta_factor(ThetaKind::Theta, 0, y, N8, r, true));
        }
        for (const auto& b : c.normals)
            for (const auto& x : b.roots) {
                consts *= Ledger::of_i(-1) * Ledger::of_i(1);
                acc = acc * theta_factor(num, b.weight, x, N8, r) * graded_inverse(theta_factor(ThetaKind::Theta, b.weight, x, N8, r));
            }
    } else {
        if (op.kind == OperatorKind::WittenH) {
            // (2 pi i)^{-k} theta'(0)^k with theta'(0) = 2 pi s1
            consts *= Ledger::of_two_pi(-k) * Ledger::of_i(-k) * Ledger::of_two_pi(k);
            acc = acc * qs_pow(s1, k);
        } else if (op.kind == OperatorKind::DVStarDifference) {
            consts *= Ledger::of_i(-k + l);
        } else {
            consts *= Ledger::of_i(-k);
        }
        for (const auto& y : c.tangent.roots) {
            consts *= Ledger::of_i(1);
            acc = acc * graded_inverse(theta_factor(ThetaKind::Theta, 0, y, N8, r, true));
        }
        for (const auto& b : c.normals)
            for (const auto& x : b.roots) {
                consts *= Ledger::of_i(1);
                acc = acc * graded_inverse(theta_factor(ThetaKind::Theta, b.weight, x, N8, r));
            }
        if (op.kind != OperatorKind::WittenH)
            for (const auto& b : c.vbundles)
                for (const auto& u : b.roots) {
                    if (num == ThetaKind::Theta) consts *= Ledger::of_i(-1);
                    acc = acc * theta_factor(num, b.weight, u, N8, r);
                }
    }

    if (op.norm == Normalization::VNormalized) {
        if (op.kind == OperatorKind::DVStarDifference) {
            consts *= Ledger::of_two_pi(l - k) * Ledger::of_two_pi(k - l);
            acc = acc * qs_pow(s1, k - l);
        } else {
            consts *= Ledger::of_two_pi(-k) * Ledger::of_two_pi(k);
            QS theta0 = to_qs(theta_derivative_series(num, 0, 0, N8));
            acc = acc * qs_pow(s1, k) * qs_pow(theta0, -l);
        }
    }
    out.payload = std::move(acc);
    return out;
}

QS ledger_rational_factor(const Ledger& e, int N8) {
    if (e.two_pi != 0 || e.i % 2 != 0)
        throw LedgerMismatch("constants " + e.to_string() + " do not reduce to a rational factor");
    QSeries<Rat> s = euler_power(e.c, N8).shifted(e.q8);
    Rat f = e.i == 2 ? -1 : 1;
    for (int j = 0; j < std::abs(e.two); ++j) f = e.two > 0 ? Rat(f * 2) : Rat(f / 2);
    return to_qs(s * f);
}

Integrand closed_integrand(const Operator& op, const FixedComponent& c, int k, int l, int N8, int r) {
    QuotientIntegrand qi = theta_quotient_integrand(op, c, k, l, N8, r);
    Ledger e = qi.consts * bridge_ledger(op, k, l).inverse();
    return qi.payload * ledger_rational_factor(e, N8);
}

namespace {

int known_order(const Integrand& g) {
    int n = QS::kExact;
    for (const auto& [m, s] : g.terms()) n = std::min(n, s.N8());
    return n;
}

Integrand truncate(const Integrand& g, int N8) {
    return g.map([&](const QS& s) { return s.truncated(N8); });
}

}  // namespace

OracleReport oracle_expand_vs_closed(const Operator& op, const ActionData& data, int N8_small) {
    OracleReport rep;
    rep.N8 = N8_small;
    const int r = data.w_resolution();
    for (const auto& c : data.components) {
        ++rep.components;
        int lines = c.k_alpha;
        for (const auto& b : c.normals) lines += b.rank;
        for (const auto& b : c.vbundles) lines += b.rank;
        const int margin = 4 * (lines + data.k + data.l) + 16;
        Integrand a = closed_integrand(op, c, data.k, data.l, N8_small + margin, r);
        Integrand b = oracle_integrand(op, c, data.k, data.l, N8_small, r);
        if (known_order(a) < N8_small) {
            rep.equal = false;
            rep.detail = "closed path known only to q^" + q_exponent_label(known_order(a)) + " on " + c.name;
            return rep;
        }
        Integrand d = truncate(a, N8_small) - truncate(b, N8_small);
        if (!d.is_zero()) {
            rep.equal = false;
            const auto& [mono, s] = *d.terms().begin();
            rep.detail = "paths differ on " + c.name + " at monomial " + mono_to_string(*c.table, mono) + ", q^" +
                         q_exponent_label(s.valuation());
            return rep;
        }
    }
    rep.detail = "paths agree on " + std::to_string(rep.components) + " component(s) to q^" + q_exponent_label(N8_small);
    return rep;
}

// ---------------- numeric ----------------

namespace {

// Jet of theta_kind(v + y) in Y = 2 pi i y; Theta is replaced by s = i theta.
std::vector<cplx> numeric_jet(ThetaKind kind, cplx v, cplx tau, int K, double eps, bool drop_order1) {
    const int off = drop_order1 ? 1 : 0;
    std::vector<cplx> raw = theta_jet(kind, v, tau, K + off, eps);
    const cplx tpi(0.0, 2 * kPi);
    std::vector<cplx> jet;
    cplx scale = 1.0;
    for (int j = 0; j <= K + off; ++j) {
        if (j >= off) jet.push_back(raw[j] * (kind == ThetaKind::Theta ? cplx(0, 1) : cplx(1, 0)) / scale);
        scale *= tpi;
    }
    return jet;
}

Graded<cplx> numeric_factor(ThetaKind kind, cplx v, const Graded<Rat>& root, cplx tau, double eps, bool drop_order1 = false) {
    auto jet = numeric_jet(kind, v, tau, root.cap() / 2, eps, drop_order1);
    return compose(jet, embed<Rat, cplx>(root));
}

}  // namespace

Graded<cplx> numeric_integrand(const Operator& op, const FixedComponent& c, int k, int l, cplx t, cplx tau, double eps) {
    Graded<cplx> acc = Graded<cplx>::constant(c.table, c.cap, 1.0);
    const ThetaKind num = numerator_theta(op.kind);
    auto w = [](const Rat& m) { return m.get_d(); };
    const cplx s1 = numeric_jet(ThetaKind::Theta, 0.0, tau, 1, eps, true)[0];
    if (!needs_v(op.kind) && op.kind != OperatorKind::WittenH) {
        for (const auto& y : c.tangent.roots)
            acc = acc * numeric_factor(num, 0.0, y, tau, eps) * graded_inverse(numeric_factor(ThetaKind::Theta, 0.0, y, tau, eps, true));
        for (const auto& b : c.normals)
            for (const auto& x : b.roots)
                acc = acc * numeric_factor(num, w(b.weight) * t, x, tau, eps) *
                      graded_inverse(numeric_factor(ThetaKind::Theta, w(b.weight) * t, x, tau, eps));
    } else {
        if (op.kind == OperatorKind::WittenH) acc = acc * std::pow(s1, k);
        for (const auto& y : c.tangent.roots)
            acc = acc * graded_inverse(numeric_factor(ThetaKind::Theta, 0.0, y, tau, eps, true));
        for (const auto& b : c.normals)
            for (const auto& x : b.roots)
                acc = acc * graded_inverse(numeric_factor(ThetaKind::Theta, w(b.weight) * t, x, tau, eps));
        if (op.kind != OperatorKind::WittenH)
            for (const auto& b : c.vbundles)
                for (const auto& u : b.roots) acc = acc * numeric_factor(num, w(b.weight) * t, u, tau, eps);
    }
    if (op.norm == Normalization::VNormalized) {
        if (op.kind == OperatorKind::DVStarDifference) {
            acc = acc * std::pow(s1, k - l);
        } else {
            cplx theta0 = theta_jet(num, 0.0, tau, 0, eps)[0];
            acc = acc * (std::pow(s1, k) / std::pow(theta0, l));
        }
    }
    return acc;
}

}  // namespace ellgen
