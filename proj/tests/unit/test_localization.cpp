#include <random>

#include "doctest.h"

#include "ellgen/catalog.hpp"
#include "ellgen/localization.hpp"

using namespace ellgen;

namespace {

Operator op_of(OperatorKind k, Normalization n = Normalization::Raw) { return Operator{k, n}; }

ActionData data_of(const std::string& name) { return builtin(name).data; }

// w d/dw on a reduced rational function.
WPoly euler_op(const WPoly& p) {
    std::map<int, Rat> t;
    for (const auto& [e, c] : p.terms()) t[e] = c * e;
    return WPoly::from_terms(t);
}
WRat euler_op(const WRat& f) {
    return WRat(euler_op(f.num()) * f.den() - f.num() * euler_op(f.den()), f.den() * f.den());
}

QSeries<WRat> unit_series(const GenusResult& r) { return r.series.coeff(r.series.unit()); }

ActionData union_of(const ActionData& a, const ActionData& b) {
    ActionData u = a;
    for (auto c : b.components) {
        c.name += "'";
        u.components.push_back(c);
    }
    return u;
}

bool is_integer_rat(const Rat& r) { return r.get_den() == 1; }

}  // namespace

TEST_SUITE("localization") {

TEST_CASE("validate examples") {
    ValidationReport v = validate(data_of("s2-rotation"));
    CHECK(v.valid);
    CHECK(v.tangent_anomaly == std::vector<Rat>{1, 1});
    CHECK(anomaly_index(data_of("s2-rotation")) == 1);

    ActionData bad;
    bad.k = 1;
    bad.components.push_back(make_component("p", bad, 0, {}, {}, {BundleSpec{0, 1, {}}}, {}, {}));
    ValidationReport b = validate(bad);
    CHECK_FALSE(b.valid);
    REQUIRE_FALSE(b.error_codes.empty());
    CHECK(b.error_codes[0] == "ZeroWeightNormalBundle");
    CHECK_THROWS_AS(require_valid(bad), ZeroWeightNormalBundle);

    ActionData rank;
    rank.k = 2;
    rank.components.push_back(make_component("p", rank, 0, {}, {}, {BundleSpec{1, 1, {}}}, {}, {}));
    CHECK_FALSE(validate(rank).valid);

    for (const auto& name : builtin_names()) {
        ActionData d = data_of(name);
        CHECK(validate(d).valid);
        if (!has_v_data(d)) CHECK(anomaly_index(with_v_equal_tangent(d)) == 0);
    }
}

TEST_CASE("anomaly examples") {
    CHECK(anomaly_index(data_of("s2-v-double-tangent")) == 1);
    CHECK(anomaly_index(builtin("s4-anomaly-two").data) == 2);
    CHECK(anomaly_index(data_of("s2-family-base")) == 0);
    CHECK_THROWS_AS(anomaly_index(data_of("cp3-weighted")), InconsistentAnomaly);

    ActionData d;
    d.k = 1;
    d.l = 1;
    d.components.push_back(make_component("a", d, 0, {}, {}, {BundleSpec{1, 1, {}}}, {BundleSpec{2, 1, {}}}, {}));
    d.components.push_back(make_component("b", d, 0, {}, {}, {BundleSpec{-1, 1, {}}}, {BundleSpec{1, 1, {}}}, {}));
    ValidationReport v = validate(d);
    CHECK(v.v_anomaly == std::vector<Rat>{3, 0});
    CHECK_FALSE(v.warnings.empty());
    CHECK_THROWS_AS(anomaly_index(d), InconsistentAnomaly);
    d.declared_anomaly = 3;
    CHECK_FALSE(validate(d).valid);
    CHECK_THROWS_AS(require_valid(d), InconsistentAnomaly);
}

TEST_CASE("S2 rotation cancellations") {
    ActionData s2 = data_of("s2-rotation");
    GenusResult ds = equivariant_character(s2, op_of(OperatorKind::DsThetaPrime), 16);
    CHECK(unit_series(ds).coeff(0).is_zero());
    // the two point contributions are opposite at q^0
    REQUIRE(ds.components.size() == 2);
    auto c0 = ds.components[0].coeff(ds.series.unit()).coeff(0), c1 = ds.components[1].coeff(ds.series.unit()).coeff(0);
    CHECK_FALSE(c0.is_zero());
    CHECK(c0 == -c1);
    GenusResult h = equivariant_character(s2, op_of(OperatorKind::WittenH), 48);
    CHECK(h.series.is_zero());
}

TEST_CASE("single point passthrough") {
    ActionData d;
    d.k = 1;
    d.components.push_back(make_component("p", d, 0, {}, {}, {BundleSpec{1, 1, {}}}, {}, {}));
    const int N8 = 24;
    GenusResult r = equivariant_character(d, op_of(OperatorKind::DThetaQ), N8);
    QuotientIntegrand qi = theta_quotient_integrand(op_of(OperatorKind::DThetaQ), d.components[0], 1, 0, N8, 1);
    // F = ledger * series on both sides, compared by evaluation
    cplx t(0.27, 0.01), tau(0.05, 1.2);
    auto fr = evaluate_series(r, t, tau).at(r.series.unit());
    cplx w = std::exp(cplx(0, 3.14159265358979323846) * t), q8 = std::exp(cplx(0, 2 * 3.14159265358979323846) * tau / 8.0);
    cplx fq = 0;
    QS q0 = qi.payload.degree_zero();
    for (const auto& [n, c] : q0.coeffs()) fq += c.eval(w) * std::pow(q8, n);
    fq *= qi.consts.value(tau);
    CHECK(std::abs(fr - fq) < 1e-10 * std::abs(fq));
}

TEST_CASE("rigidity examples") {
    RigidityVerdict s2 = rigidity_check(equivariant_character(data_of("s2-rotation"), op_of(OperatorKind::DThetaQ), 32));
    CHECK(s2.rigid);
    for (const auto& c : s2.constants) CHECK(c.value == 0);

    RigidityVerdict cp3 = rigidity_check(equivariant_character(data_of("cp3-weighted"), op_of(OperatorKind::DsThetaPrime), 16));
    CHECK(cp3.rigid);
    Rat q0 = 0;
    for (const auto& c : cp3.constants)
        if (c.q8 == 0) q0 = c.value;
    CHECK(q0 == 0);

    RigidityVerdict bad =
        rigidity_check(equivariant_character(builtin("cp3-weighted-corrupted").data, op_of(OperatorKind::DsThetaPrime), 16));
    CHECK_FALSE(bad.rigid);
    REQUIRE(bad.witness.has_value());
    CHECK_FALSE(bad.witness->value.is_constant());
    CHECK(bad.witness->q8 == 0);

    // the signature-type operator on S2xS2 is rigid with q^0 constant 0 (signature of S2xS2)
    RigidityVerdict s2s2 =
        rigidity_check(equivariant_character(data_of("s2xs2-birotation"), op_of(OperatorKind::DsThetaPrime), 16));
    CHECK(s2s2.rigid);
}

TEST_CASE("pole cancellation") {
    GenusResult s2 = equivariant_character(data_of("s2-rotation"), op_of(OperatorKind::DThetaQ), 16);
    PoleReport rep = pole_cancellation_check(s2.components);
    CHECK(rep.holomorphic);
    CHECK(rep.cancelled_entirely);
    CHECK(rep.max_den_degree_before > 0);
    CHECK(rep.max_den_degree_after == 0);

    PoleReport single = pole_cancellation_check({s2.components[0]});
    CHECK_FALSE(single.holomorphic);
    CHECK(single.max_den_degree_after > 0);

    GenusResult cp3 = equivariant_character(data_of("cp3-weighted"), op_of(OperatorKind::DThetaQ), 8);
    CHECK(cp3.series.coeff(cp3.series.unit()).coeff(4).den().is_constant());
    CHECK(pole_cancellation_check(cp3.components).cancelled_entirely);
}

TEST_CASE("degree_component") {
    GenusResult pt = equivariant_character(builtin("cp2-fixed-line").data, op_of(OperatorKind::DThetaQ), 16);
    auto p0 = degree_component(pt, 0);
    REQUIRE(p0.size() == 1);
    CHECK(p0.begin()->second == unit_series(pt));
    CHECK_THROWS_AS(degree_component(pt, 2), DegreeOutOfRange);
    CHECK_THROWS_AS(degree_component(pt, 1), DegreeOutOfRange);

    // one family component is its point-base data with w shifted to w e^{b/2}
    ActionData fam = data_of("s2-family-base");
    fam.components.resize(1);
    for (const Operator& op : {op_of(OperatorKind::DThetaQ), op_of(OperatorKind::DsThetaPrime), op_of(OperatorKind::DVThetaQ)}) {
        GenusResult r = equivariant_character(fam, op, 16);
        auto d0 = degree_component(r, 0), d2 = degree_component(r, 2), d4 = degree_component(r, 4);
        const Mono one{0}, b{1}, b2{2};
        auto f0 = d0.count(one) ? d0.at(one) : QSeries<WRat>(16);
        auto f1 = d2.count(b) ? d2.at(b) : QSeries<WRat>(16);
        auto f2 = d4.count(b2) ? d4.at(b2) : QSeries<WRat>(16);
        CAPTURE(operator_name(op));
        REQUIRE_FALSE(f0.is_zero());
        for (int n = f0.valuation(); n <= 16; ++n) {
            WRat e1 = euler_op(f0.coeff(n)) * WRat(make_rat(1, 2));
            WRat e2 = euler_op(euler_op(f0.coeff(n))) * WRat(make_rat(1, 8));
            CHECK(f1.coeff(n) == e1);
            CHECK(f2.coeff(n) == e2);
        }
        CHECK_THROWS_AS(degree_component(r, 6), DegreeOutOfRange);
    }
}

TEST_CASE("disjoint union is additive") {
    ActionData a = builtin("cp2-fixed-line").data, b = negate_weights(builtin("s4-rotation-half").data);
    ActionData u = union_of(a, b);
    for (OperatorKind k : {OperatorKind::DThetaQ, OperatorKind::DsThetaPrime, OperatorKind::WittenH}) {
        auto ra = equivariant_character(a, op_of(k), 16), rb = equivariant_character(b, op_of(k), 16);
        auto ru = equivariant_character(u, op_of(k), 16);
        CHECK_FALSE(ra.series.is_zero());
        auto in_u = [&](const GenusResult& r) {
            int k = ru.w_resolution / r.w_resolution;
            return unit_series(r).map([k](const WRat& f) { return f.substitute_power(k); });
        };
        CHECK(ru.w_resolution == 2);
        CHECK(unit_series(ru) == in_u(ra) + in_u(rb));
    }
}

TEST_CASE("weight negation maps w to 1/w") {
    for (const std::string name : {"cp2-fixed-line", "s2xs2-birotation", "s2-family-base"}) {
        ActionData d = builtin(name).data, n = negate_weights(d);
        for (OperatorKind k : {OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ, OperatorKind::WittenH}) {
            auto r = equivariant_character(d, op_of(k), 16), s = equivariant_character(n, op_of(k), 16);
            CAPTURE(name);
            for (const auto& [m, series] : r.series.terms())
                CHECK(series.map([](const WRat& f) { return f.substitute_power(-1); }) == s.series.coeff(m));
            CHECK(r.series.terms().size() == s.series.terms().size());
        }
    }
}

TEST_CASE("numeric evaluation") {
    ActionData s2 = data_of("s2-rotation");
    auto h = evaluate_numeric(s2, op_of(OperatorKind::WittenH), 0.3, cplx(0, 1), 1e-12);
    CHECK(std::abs(h.begin()->second) < 1e-9);

    ActionData cp3 = data_of("cp3-weighted");
    const double eps = 1e-12;
    for (OperatorKind k : {OperatorKind::DThetaQ, OperatorKind::DsThetaPrime, OperatorKind::DThetaMinusQ}) {
        cplx tau(0.13, 0.9);
        cplx a = evaluate_numeric(cp3, op_of(k), 0.21, tau, eps).begin()->second;
        cplx b = evaluate_numeric(cp3, op_of(k), 0.37, tau, eps).begin()->second;
        CHECK(std::abs(a - b) < 2 * eps * std::max(1.0, std::abs(a)) + 1e-12);
        // five generic t against the constant from the exact engine
        GenusResult r = equivariant_character(cp3, op_of(k), 96);
        REQUIRE(rigidity_check(r).rigid);
        cplx constant = evaluate_series(r, 0.5, cplx(0.13, 1.4)).begin()->second;
        for (double t : {0.11, 0.23, 0.31, 0.43, 0.67}) {
            cplx v = evaluate_numeric(cp3, op_of(k), t, cplx(0.13, 1.4), eps).begin()->second;
            CHECK(std::abs(v - constant) < 1e-9 * std::max(1.0, std::abs(constant)));
        }
    }
    CHECK_THROWS_AS(evaluate_numeric(s2, op_of(OperatorKind::DThetaQ), 1e-8, cplx(0, 1), 1e-12), NearPole);
    CHECK_THROWS_AS(evaluate_numeric(s2, op_of(OperatorKind::DThetaQ), 0.3, cplx(0, -1), 1e-12), NonconvergentDomain);
}

TEST_CASE("formal against numeric on rigid and non-rigid data") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> tr(0.05, 0.45), ti(-0.05, 0.05), re(-0.5, 0.5), im(1.1, 1.5);
    const std::vector<std::pair<std::string, OperatorKind>> cases = {
        {"s2-rotation", OperatorKind::DThetaQ},        {"s4-rotation", OperatorKind::DsThetaPrime},
        {"cp3-weighted", OperatorKind::DThetaMinusQ},  {"s2xs2-birotation", OperatorKind::WittenH},
        {"cp2-fixed-line", OperatorKind::DThetaQ},     {"cp2-fixed-line", OperatorKind::DsThetaPrime},
        {"cp3-weighted-corrupted", OperatorKind::DThetaQ}, {"s4-anomaly-two", OperatorKind::DVThetaQ},
        {"s2-v-double-tangent", OperatorKind::DVThetaMinusQ}, {"s4-rotation-half", OperatorKind::DThetaQ}};
    for (const auto& [name, kind] : cases) {
        ActionData d = builtin(name).data;
        GenusResult r = equivariant_character(d, op_of(kind), 64);
        cplx t(tr(rng), ti(rng)), tau(re(rng), im(rng));
        auto a = evaluate_series(r, t, tau);
        auto b = evaluate_numeric(d, op_of(kind), t, tau, 1e-13);
        CAPTURE(name);
        for (const auto& [m, v] : b) {
            cplx s = a.count(m) ? a.at(m) : 0.0;
            CHECK(std::abs(s - v) < 1e-8 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST_CASE("rigid constants are integers on integer-weight data") {
    for (const std::string name : {"s2-rotation", "s4-rotation", "cp3-weighted", "s2xs2-birotation"}) {
        ActionData d = data_of(name);
        for (const Operator& op : all_operators()) {
            if (needs_v(op.kind)) continue;
            RigidityVerdict v = rigidity_check(equivariant_character(d, op, 32));
            CAPTURE(name);
            CAPTURE(operator_name(op));
            CHECK(v.rigid);
            for (const auto& c : v.constants) CHECK(is_integer_rat(c.value));
        }
    }
}

}
