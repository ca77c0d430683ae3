#include "ellgen/jacobi.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ellgen/errors.hpp"

namespace ellgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0, 1);

long mod2(long x) { return ((x % 2) + 2) % 2; }

double discrepancy(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// 8-point Gauss–Legendre nodes and weights on [-1, 1].
constexpr double kGLx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGLw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Contour {
    const NumericFn& F;
    cplx tau;
    int panels = 0;

    cplx value(cplx z) {
        cplx v = F(z, tau);
        if (!finite(v)) throw NonFiniteSample("non-finite value at t = " + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i");
        return v;
    }
    cplx log_derivative(cplx z, double h) {
        cplx d = (value(z + h) - value(z - h)) / (2 * h);
        return d / value(z);
    }
    static double phase_jump(cplx a, cplx b) { return std::abs(std::arg(b / a)); }

    // integral of F'/F over the segment a -> b
    cplx segment(cplx a, cplx b, cplx fa, cplx fb, int depth) {
        cplx mid = 0.5 * (a + b);
        cplx fm = value(mid);
        if (phase_jump(fa, fm) > kPi / 2 || phase_jump(fm, fb) > kPi / 2) {
            if (depth >= 24) throw BoundaryZero("zero on the contour near t = " + std::to_string(mid.real()) + "+" + std::to_string(mid.imag()) + "i");
            return segment(a, mid, fa, fm, depth + 1) + segment(mid, b, fm, fb, depth + 1);
        }
        ++panels;
        const cplx half = 0.5 * (b - a);
        const double h = 1e-5 * std::max(1e-3, std::abs(b - a));
        cplx acc = 0;
        for (int i = 0; i < 8; ++i) acc += kGLw[i] * log_derivative(mid + kGLx[i] * half, h);
        return acc * half;
    }
};

}  // namespace

std::string ModularMatrix::to_string() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

std::string group_name(ModularGroup g) {
    switch (g) {
        case ModularGroup::Gamma0_2: return "Gamma_0(2)";
        case ModularGroup::GammaUpper0_2: return "Gamma^0(2)";
        case ModularGroup::GammaTheta: return "Gamma_theta";
        case ModularGroup::SL2Z: return "SL_2(Z)";
    }
    return "?";
}

bool subgroup_member(const ModularMatrix& g, ModularGroup group) {
    if (g.det() != 1) return false;
    switch (group) {
        case ModularGroup::Gamma0_2: return mod2(g.c) == 0;
        case ModularGroup::GammaUpper0_2: return mod2(g.b) == 0;
        case ModularGroup::GammaTheta: {
            bool identity = mod2(g.a) == 1 && mod2(g.b) == 0 && mod2(g.c) == 0 && mod2(g.d) == 1;
            bool anti = mod2(g.a) == 0 && mod2(g.b) == 1 && mod2(g.c) == 1 && mod2(g.d) == 0;
            return identity || anti;
        }
        case ModularGroup::SL2Z: return true;
    }
    return false;
}

std::vector<ModularMatrix> group_generators(ModularGroup group) {
    switch (group) {
        case ModularGroup::Gamma0_2: return {kT, {1, 0, 2, 1}, {-1, -1, 2, 1}};
        case ModularGroup::GammaUpper0_2: return {{1, 2, 0, 1}, {1, 0, 1, 1}};
        case ModularGroup::GammaTheta: return {kS, kT * kT};
        case ModularGroup::SL2Z: return {kS, kT};
    }
    return {};
}

NumericFn slash_action(NumericFn F, const ModularMatrix& g, const JacobiFormSpec& spec) {
    const double m = spec.index.get_d();
    const int l = spec.weight;
    return [F = std::move(F), g, m, l](cplx t, cplx tau) {
        cplx j = static_cast<double>(g.c) * tau + static_cast<double>(g.d);
        cplx tau2 = (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) / j;
        cplx pref = std::pow(j, -l) * std::exp(-2.0 * kPi * kI * m * static_cast<double>(g.c) * t * t / j);
        return pref * F(t / j, tau2);
    };
}

JacobiReport check_jacobi(const NumericFn& F, const JacobiFormSpec& spec, const std::vector<ModularMatrix>& generators,
                          const std::vector<std::pair<int, int>>& lattice_vectors, int samples, double eps, uint64_t seed) {
    JacobiReport rep;
    for (const auto& g : generators)
        if (!subgroup_member(g, spec.group))
            throw InvalidDataset("generator " + g.to_string() + " is not in " + group_name(spec.group));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    const double m = spec.index.get_d();
    std::vector<NumericFn> slashed;
    for (const auto& g : generators) slashed.push_back(slash_action(F, g, spec));
    std::string worst;
    int attempts = 0;
    while (rep.samples < samples) {
        if (++attempts > 20 * samples + 20) throw NearPole("too many samples near poles");
        cplx tau(U(rng) - 0.5, 0.6 + 0.8 * U(rng));
        cplx t(2 * U(rng) - 1, (0.6 * U(rng) - 0.3) * tau.imag());
        try {
            cplx f = F(t, tau);
            for (size_t i = 0; i < generators.size(); ++i) {
                double d = discrepancy(slashed[i](t, tau), f);
                if (d > rep.max_modular) {
                    rep.max_modular = d;
                    worst = "modular law under " + generators[i].to_string();
                }
            }
            for (const auto& [lam, mu] : lattice_vectors) {
                // automorphy factor moved to the shifted side
                cplx shifted = F(t + static_cast<double>(lam) * tau + static_cast<double>(mu), tau);
                cplx lhs = std::exp(2.0 * kPi * kI * m * (static_cast<double>(lam * lam) * tau + 2.0 * lam * t)) * shifted;
                double d = discrepancy(lhs, f);
                if (d > rep.max_lattice) {
                    rep.max_lattice = d;
                    worst = "lattice law for (" + std::to_string(lam) + "," + std::to_string(mu) + ")";
                }
            }
            ++rep.samples;
        } catch (const NearPole&) {
            ++rep.skipped;
        }
    }
    rep.pass = rep.max_modular < eps && rep.max_lattice < eps;
    std::ostringstream os;
    os << "index " << rat_to_string(spec.index) << ", weight " << spec.weight << " over " << (spec.lattice_2z ? "(2Z)^2" : "Z^2")
       << " x " << group_name(spec.group) << ": " << rep.samples << " samples, max discrepancy modular " << rep.max_modular
       << ", lattice " << rep.max_lattice;
    if (!worst.empty()) os << " (worst: " << worst << ")";
    rep.detail = os.str();
    return rep;
}

ZeroCount count_zeros(const NumericFn& F, cplx tau, cplx origin, cplx v1, cplx v2, double eps) {
    if (!(tau.imag() > 0)) throw NonconvergentDomain("Im tau must be positive");
    ZeroCount out;
    Contour c{F, tau};
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            cplx z = origin + ((i + 0.5) / 16) * v1 + ((j + 0.5) / 16) * v2;
            out.max_abs = std::max(out.max_abs, std::abs(c.value(z)));
        }
    if (out.max_abs < eps) {
        out.identically_zero = true;
        return out;
    }
    for (int attempt = 0;; ++attempt) {
        cplx o = origin + (0.0371 * attempt) * v1 + (0.0293 * attempt) * v2;
        const cplx corners[5] = {o, o + v1, o + v1 + v2, o + v2, o};
        try {
            cplx total = 0;
            for (int e = 0; e < 4; ++e) {
                cplx step = (corners[e + 1] - corners[e]) / 32.0;
                for (int p = 0; p < 32; ++p) {
                    cplx x0 = corners[e] + static_cast<double>(p) * step, x1 = x0 + step;
                    cplx f0 = c.value(x0), f1 = c.value(x1);
                    if (f0 == 0.0 || f1 == 0.0) throw BoundaryZero("exact zero on the contour");
                    total += c.segment(x0, x1, f0, f1, 0);
                }
            }
            out.count = (total / (2.0 * kPi * kI)).real();
            out.perturbations = attempt;
            out.panels = c.panels;
            return out;
        } catch (const BoundaryZero&) {
            if (attempt == 3) throw BoundaryZero("zero on the cell boundary after 3 perturbations");
        }
    }
}

Designation designate(const Operator& op, int k, int l, int n, int p) {
    Designation d;
    d.op = op;
    d.spec.lattice_2z = true;
    d.spec.weight = k + p;
    d.spec.index = Rat(n, 2);
    d.spec.index.canonicalize();
    switch (op.kind) {
        case OperatorKind::DeltaVThetaPrime: d.spec.group = ModularGroup::Gamma0_2; break;
        case OperatorKind::DVThetaQ: d.spec.group = ModularGroup::GammaUpper0_2; break;
        case OperatorKind::DVThetaMinusQ: d.spec.group = ModularGroup::GammaTheta; break;
        case OperatorKind::DVStarDifference:
            d.spec.group = ModularGroup::SL2Z;
            d.spec.weight = k - l + p;
            break;
        case OperatorKind::WittenH:
            d.spec.group = ModularGroup::SL2Z;
            d.spec.index = -d.spec.index;
            d.note = "p1(TX) = " + std::to_string(n) + " u^2, so the index is -" + std::to_string(n) + "/2";
            return d;
        default:
            throw InvalidDataset("operator " + operator_name(op) + " has no Jacobi designation; use a V operator or witten-h");
    }
    if (op.norm == Normalization::Raw) {
        d.op.norm = Normalization::VNormalized;
        d.note = "using the v-normalized form " + operator_name(d.op);
    }
    return d;
}

NumericFn component_function(const ActionData& data, const Operator& op, const Mono& mono, double eps) {
    return [data, op, mono, eps](cplx t, cplx tau) {
        auto vals = evaluate_numeric(data, op, t, tau, eps);
        auto it = vals.find(mono);
        return it == vals.end() ? cplx(0) : it->second;
    };
}

std::string index_class_name(IndexClass c) {
    switch (c) {
        case IndexClass::RigidByZeroIndex: return "RigidByZeroIndex";
        case IndexClass::VanishesByNegativeIndex: return "VanishesByNegativeIndex";
        case IndexClass::PositiveIndexJacobiForm: return "PositiveIndexJacobiForm";
    }
    return "?";
}

IndexVerdict rigidity_verdict_from_index(int n, const GenusResult& result) {
    IndexVerdict v;
    v.series_zero = result.series.is_zero();
    std::ostringstream os;
    if (n == 0) {
        v.cls = IndexClass::RigidByZeroIndex;
        RigidityVerdict r = rigidity_check(result);
        v.confirmed = r.rigid;
        os << (r.rigid ? "rigid: every coefficient is w-free" : "not rigid despite zero anomaly");
        if (r.witness) os << " (witness at q^" << q_exponent_label(r.witness->q8) << ")";
    } else if (n < 0) {
        v.cls = IndexClass::VanishesByNegativeIndex;
        v.confirmed = v.series_zero;
        v.contradiction = !v.series_zero;
        os << (v.series_zero ? "series vanishes exactly" : "series is nonzero although the index is negative: the data violate the spin hypotheses");
    } else {
        v.cls = IndexClass::PositiveIndexJacobiForm;
        PoleReport p = pole_cancellation_check({result.series});
        v.confirmed = p.holomorphic;
        os << "positive index " << n << "/2; " << (p.holomorphic ? "coefficients are Laurent polynomials" : "poles remain");
        if (v.series_zero) os << "; series vanishes exactly";
    }
    v.detail = os.str();
    return v;
}

}  // namespace ellgen
