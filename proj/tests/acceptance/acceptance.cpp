#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "ellgen/catalog.hpp"
#include "ellgen/errors.hpp"
#include "ellgen/genera.hpp"
#include "ellgen/jacobi.hpp"
#include "ellgen/localization.hpp"
#include "ellgen/theta.hpp"

using namespace ellgen;

namespace {

const double kPi = 3.14159265358979323846;
const cplx kI(0, 1);
const ThetaKind kKinds[] = {ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3};

Operator raw(OperatorKind k) { return Operator{k, Normalization::Raw}; }

const OperatorKind kPlain[] = {OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ, OperatorKind::WittenH};
const OperatorKind kWithV[] = {OperatorKind::DeltaVThetaPrime, OperatorKind::DVThetaQ, OperatorKind::DVThetaMinusQ,
                               OperatorKind::DVStarDifference};

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Unit shifts t+1 and t+tau: sign under t+1, sign in front of q^{-1/2} e^{-2 pi i t} under t+tau.
Outcome unit_shift_laws(int samples, double tol) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(-0.5, 0.5), ui(0.5, 1.5);
    double worst = 0;
    int laws = 0;
    for (ThetaKind kind : kKinds) {
        double s1 = (kind == ThetaKind::Theta || kind == ThetaKind::Theta1) ? -1 : 1;
        double st = (kind == ThetaKind::Theta || kind == ThetaKind::Theta2) ? -1 : 1;
        for (int law = 0; law < 2; ++law, ++laws) {
            for (int i = 0; i < samples; ++i) {
                cplx tau(ur(rng), ui(rng)), t(ur(rng), 0.4 * ur(rng));
                cplx lhs, rhs;
                if (law == 0) {
                    lhs = theta_numeric(kind, t + 1.0, tau);
                    rhs = s1 * theta_numeric(kind, t, tau);
                } else {
                    lhs = theta_numeric(kind, t + tau, tau);
                    rhs = st * std::exp(-kI * kPi * tau - 2.0 * kPi * kI * t) * theta_numeric(kind, t, tau);
                }
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
            }
        }
    }
    std::ostringstream d;
    d << laws << " unit-shift laws, max relative discrepancy " << worst;
    return {worst < tol, d.str()};
}

// Nullwerte by direct multiplication of the product factors, in q^{1/8} units.
std::vector<long long> nullwert_oracle(int sign, int N8) {
    std::vector<long long> s(N8 + 1, 0);
    s[0] = 1;
    auto times = [&](int step, long long c) {
        for (int i = N8; i >= step; --i) s[i] += c * s[i - step];
    };
    for (int n = 1; 8 * n <= N8; ++n) times(8 * n, -1);
    for (int n = 1; 8 * n - 4 <= N8; ++n) {
        times(8 * n - 4, sign);
        times(8 * n - 4, sign);
    }
    return s;
}

ActionData single_component(ActionData d, size_t i) {
    FixedComponent c = d.components[i];
    d.components = {c};
    return d;
}

JacobiReport jacobi_at(const ActionData& d, const Operator& op, int n, int p, const Mono& mono, int samples, bool weight_shift = false) {
    Designation des = designate(op, d.k, d.l, n, p);
    JacobiFormSpec spec = des.spec;
    if (weight_shift) spec.weight = d.k + p;
    int s = spec.lattice_2z ? 2 : 1;
    return check_jacobi(component_function(d, des.op, mono), spec, group_generators(spec.group), {{s, 0}, {0, s}}, samples, 1e-8);
}

Outcome criterion1() {
    double worst = 0;
    bool ok = true;
    for (ThetaKind kind : kKinds)
        for (ModGen g : {ModGen::S, ModGen::T}) {
            LawReport r = check_modular_ST(kind, g, 20, 1e-9);
            ok = ok && r.pass && r.samples == 20;
            worst = std::max(worst, r.max_discrepancy);
        }
    Outcome shifts = unit_shift_laws(20, 1e-9);
    bool lattice = true;
    for (ThetaKind kind : kKinds)
        for (auto [l, a, b] : {std::tuple{1, 2, 0}, std::tuple{1, 0, 2}, std::tuple{2, 2, -2}})
            lattice = lattice && check_quasi_periodicity(kind, l, a, b, 20, 1e-9).pass;
    std::ostringstream d;
    d << "8 modular identities max discrepancy " << worst << "; " << shifts.detail << "; (2Z)^2 lattice laws "
      << (lattice ? "pass" : "fail");
    return {ok && shifts.pass && lattice, d.str()};
}

Outcome criterion2() {
    bool ok = true;
    for (auto [kind, sign] : {std::pair{ThetaKind::Theta2, -1}, std::pair{ThetaKind::Theta3, 1}}) {
        ThetaSeries ts = theta_formal(kind, 0, 64);
        std::vector<long long> oracle = nullwert_oracle(sign, 64);
        for (int n = 0; n <= 64; ++n) ok = ok && ts.series.coeff(n) == WRat(Rat(static_cast<long>(oracle[n])));
        ok = ok && ts.ledger.constants_equal(Ledger{});
    }
    return {ok, "theta2(0), theta3(0) against the product expansion through q^8"};
}

Outcome criterion3() {
    GenusResult r = equivariant_character(builtin("s2-rotation").data, raw(OperatorKind::WittenH), 48);
    bool zero = r.series.is_zero();
    bool singles_nonzero = true;
    for (const auto& c : r.components) singles_nonzero = singles_nonzero && !c.is_zero();
    PoleReport north = pole_cancellation_check({r.components[0]});
    PoleReport both = pole_cancellation_check(r.components);
    std::ostringstream d;
    d << "sum through q^6 is " << (zero ? "exactly 0" : "nonzero") << "; " << r.components.size() << " single contributions "
      << (singles_nonzero ? "nonzero" : "include a zero") << ", single-point denominator degree " << north.max_den_degree_after;
    return {zero && singles_nonzero && !north.holomorphic && both.cancelled_entirely, d.str()};
}

Outcome criterion4() {
    bool ok = true;
    int verdicts = 0;
    for (const std::string name : {"cp3-weighted", "s2xs2-birotation"}) {
        ActionData d = builtin(name).data;
        for (OperatorKind k : kPlain) {
            GenusResult r = equivariant_character(d, raw(k), 32);
            RigidityVerdict v = rigidity_check(r);
            ok = ok && v.rigid;
            ++verdicts;
            if (k == OperatorKind::DsThetaPrime) {
                Rat q0 = 0;
                for (const auto& c : v.constants)
                    if (c.q8 == 0 && std::all_of(c.mono.begin(), c.mono.end(), [](int e) { return e == 0; })) q0 = c.value;
                ok = ok && q0 == 0 && r.series.degree_zero().coeff(0).is_zero();
            }
        }
    }
    return {ok, std::to_string(verdicts) + " verdicts rigid through q^4; signature-type q^0 constant 0 on both"};
}

Outcome criterion5() {
    ActionData d = with_v_equal_tangent(builtin("cp3-weighted").data);
    int n = anomaly_index(d);
    bool ok = n == 0;
    std::ostringstream d_;
    for (OperatorKind k : kWithV) {
        RigidityVerdict v = rigidity_check(equivariant_character(d, raw(k), 32));
        ok = ok && v.rigid;
        d_ << operator_name(raw(k)) << (v.rigid ? " rigid" : " NOT rigid") << "; ";
    }
    d_ << "anomaly " << n;
    return {ok, d_.str()};
}

Outcome criterion6() {
    ActionData d = builtin("s2-v-double-tangent").data;
    int n = anomaly_index(d);
    bool ok = n == 1;
    Mono origin(d.base_table->size(), 0);
    std::ostringstream out;
    out << "anomaly " << n;
    int checked = 0;
    for (OperatorKind k : kWithV) {
        if (k == OperatorKind::DVStarDifference) continue;
        JacobiReport full = jacobi_at(d, raw(k), n, 0, origin, 32);
        JacobiReport north = jacobi_at(single_component(d, 0), raw(k), n, 0, origin, 32);
        ok = ok && full.pass && north.pass;
        checked += 2;
    }
    out << "; " << checked << " Jacobi checks (full data and north point alone) " << (ok ? "pass" : "fail");
    cplx tau(0.5, 1.2);
    ZeroCount z = count_zeros(component_function(d, Operator{OperatorKind::DVThetaQ, Normalization::VNormalized}, origin), tau,
                              cplx(-1.013, -0.021) - tau, 2.0, 2.0 * tau);
    if (z.identically_zero)
        out << "; zero count: IdenticallyZero (max |F| " << z.max_abs << ")";
    else {
        out << "; zero count " << z.count;
        ok = ok && std::abs(z.count - 4) <= 0.2;
    }
    return {ok, out.str()};
}

Outcome criterion7() {
    ActionData d = builtin("s2-family-base").data;
    int n = anomaly_index(d);
    Mono b = {1};
    bool ok = true;
    std::ostringstream out;
    for (const ActionData& data : {d, single_component(d, 0)}) {
        JacobiReport r = jacobi_at(data, raw(OperatorKind::DVThetaQ), n, 1, b, 16, true);
        ok = ok && r.pass;
        out << (data.components.size() == 1 ? "north point alone: " : "full data: ") << (r.pass ? "pass" : "fail") << " at weight "
            << d.k + 1 << "; ";
    }
    Designation des = designate(raw(OperatorKind::DVThetaQ), d.k, d.l, n, 1);
    out << "|F| of the full data at t = 0.21+0.05i, tau = 0.1+1.1i: "
        << std::abs(component_function(d, des.op, b)(cplx(0.21, 0.05), cplx(0.1, 1.1)));
    return {ok, out.str()};
}

Outcome criterion8() {
    std::vector<std::string> names = builtin_names();
    for (const auto& e : extra_names()) names.push_back(e);
    int checks = 0;
    bool ok = true;
    std::string first_failure;
    for (const auto& name : names) {
        ActionData d = builtin(name).data;
        bool v = has_v_data(d);
        for (const Operator& op : all_operators()) {
            if (needs_v(op.kind) && !v) continue;
            OracleReport r = oracle_expand_vs_closed(op, d, 16);
            ++checks;
            if (!r.equal && first_failure.empty()) first_failure = name + "/" + operator_name(op) + ": " + r.detail;
            ok = ok && r.equal;
        }
    }
    for (OperatorKind k : {OperatorKind::DThetaQ, OperatorKind::DsThetaPrime, OperatorKind::WittenH}) {
        OracleCheck c = oracle_check_s2(raw(k), 16);
        ok = ok && c.equal;
        ++checks;
        if (!c.equal && first_failure.empty()) first_failure = c.detail;
    }
    std::ostringstream out;
    out << checks << " exact comparisons through q^2, calibration shift " << borel_weil_calibration();
    if (!first_failure.empty()) out << "; first failure " << first_failure;
    return {ok, out.str()};
}

Outcome criterion9() {
    std::vector<std::string> names = builtin_names();
    for (const auto& e : extra_names()) names.push_back(e);
    int rigid = 0, constants = 0, nonzero = 0;
    bool ok = true;
    std::vector<ActionData> sets;
    for (const auto& name : names) {
        ActionData d = builtin(name).data;
        if (d.w_resolution() != 1) continue;
        sets.push_back(d);
        // V = TX turns the vanishing verdicts into nonzero rigid constants
        if (!has_v_data(d)) sets.push_back(with_v_equal_tangent(d));
    }
    for (const ActionData& d : sets) {
        bool v = has_v_data(d);
        for (const Operator& op : all_operators()) {
            if (needs_v(op.kind) && !v) continue;
            GenusResult r;
            try {
                r = equivariant_character(d, op, 32);
            } catch (const InconsistentAnomaly&) {
                continue;
            }
            RigidityVerdict verdict = rigidity_check(r);
            if (!verdict.rigid) continue;
            ++rigid;
            for (const auto& c : verdict.constants) {
                ++constants;
                nonzero += c.value != 0;
                ok = ok && rat_is_integer(c.value);
            }
        }
    }
    return {ok && nonzero > 0, std::to_string(constants) + " constants (" + std::to_string(nonzero) + " nonzero) from " +
                                   std::to_string(rigid) + " rigid verdicts, " + (ok ? "all integers" : "NOT all integers")};
}

Outcome criterion10() {
    RigidityVerdict v = rigidity_check(equivariant_character(builtin("cp3-weighted-corrupted").data, raw(OperatorKind::DThetaQ), 32));
    bool witness = !v.rigid && v.witness.has_value();
    ActionData bad;
    bad.k = 1;
    bad.components.push_back(make_component("p", bad, 0, {}, {}, {BundleSpec{0, 1, {}}}, {}, {}));
    ValidationReport rep = validate(bad);
    bool rejected = !rep.valid && !rep.error_codes.empty() && rep.error_codes[0] == "ZeroWeightNormalBundle";
    std::ostringstream out;
    out << "corrupted cp3: " << (witness ? "NotRigid with witness at q^(" + std::to_string(v.witness->q8) + "/8)" : "no witness")
        << "; zero-weight normal bundle " << (rejected ? "rejected" : "accepted");
    return {witness && rejected, out.str()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {"theta law suite", 5, criterion1},
        {"nullwert expansions", 5, criterion2},
        {"two-sphere vanishing", 10, criterion3},
        {"rigidity without V", 60, criterion4},
        {"rigidity with V = TX", 60, criterion5},
        {"anomaly and Jacobi behavior", 120, criterion6},
        {"family weight shift", 60, criterion7},
        {"cross-path oracles", 120, criterion8},
        {"integrality", 1e9, criterion9},
        {"negative controls", 1e9, criterion10},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = s < criteria[i].budget_s;
        bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("[%s] %2zu %s (%.2f s%s): %s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name, s, in_time ? "" : ", over budget",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
