#include "ellgen/catalog.hpp"

#include <sstream>

#include "ellgen/errors.hpp"
#include "ellgen/localization.hpp"

namespace ellgen {

namespace {

using Roots = std::vector<std::vector<std::pair<std::string, Rat>>>;

BundleSpec line(const Rat& weight, const std::vector<std::pair<std::string, Rat>>& root = {}) {
    BundleSpec b;
    b.weight = weight;
    b.rank = 1;
    if (!root.empty()) b.roots = {root};
    return b;
}

BundleSpec trivial_roots(const Rat& weight, int rank) {
    BundleSpec b;
    b.weight = weight;
    b.rank = rank;
    return b;
}

std::vector<BundleSpec> lines(const std::vector<Rat>& weights) {
    std::vector<BundleSpec> out;
    for (const auto& w : weights) out.push_back(line(w));
    return out;
}

ActionData isolated_points(int k, const std::vector<std::vector<Rat>>& weights) {
    ActionData d;
    d.k = k;
    for (size_t i = 0; i < weights.size(); ++i)
        d.components.push_back(make_component("p" + std::to_string(i), d, 0, {}, {}, lines(weights[i]), {}, {}));
    return d;
}

std::vector<ExpectedVerdict> non_v_rigid() {
    std::vector<ExpectedVerdict> e;
    for (auto k : {OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ})
        e.push_back({{k, Normalization::Raw}, Expectation::Rigid});
    return e;
}

std::vector<ExpectedVerdict> v_kinds(Expectation ex) {
    std::vector<ExpectedVerdict> e;
    for (const auto& op : all_operators())
        if (needs_v(op.kind)) e.push_back({op, ex});
    return e;
}

void append(std::vector<ExpectedVerdict>& a, const std::vector<ExpectedVerdict>& b) { a.insert(a.end(), b.begin(), b.end()); }

ExpectedVerdict h_vanishing() { return {{OperatorKind::WittenH, Normalization::Raw}, Expectation::Vanishing}; }

CatalogEntry s2_rotation() {
    CatalogEntry e;
    e.name = "s2-rotation";
    e.doc = "Rotation of the two-sphere about an axis: two isolated fixed points with tangent weights +1 and -1.";
    e.provenance = "standard rotation fixed-point data";
    e.data = isolated_points(1, {{1}, {-1}});
    e.data.components[0].name = "north";
    e.data.components[1].name = "south";
    e.expected = non_v_rigid();
    e.expected.push_back(h_vanishing());
    return e;
}

CatalogEntry s4_rotation(bool half) {
    CatalogEntry e;
    e.name = half ? "s4-rotation-half" : "s4-rotation";
    Rat a = half ? make_rat(1, 2) : Rat(1);
    e.doc = half ? "Four-sphere, both rotation planes at speed 1/2 (double-cover lift): fixed points with weights (1/2,1/2) and (1/2,-1/2)."
                 : "Four-sphere rotating both planes at speed 1: fixed points with weights (1,1) and (1,-1).";
    e.provenance = half ? "half-integer variant of s4-rotation; sum m d(m) has different parity at the two points"
                        : "rotation of R^4 inside R^5; orientation reverses one weight at the south pole";
    e.data = isolated_points(2, {{a, a}, {a, -a}});
    e.data.components[0].name = "north";
    e.data.components[1].name = "south";
    if (half) {
        e.expected.push_back({{OperatorKind::DsThetaPrime, Normalization::Raw}, Expectation::Rigid});
    } else {
        e.expected = non_v_rigid();
        e.expected.push_back(h_vanishing());
    }
    return e;
}

CatalogEntry cp3_weighted(bool corrupted) {
    CatalogEntry e;
    e.name = corrupted ? "cp3-weighted-corrupted" : "cp3-weighted";
    e.doc = corrupted ? "cp3-weighted with the first weight at the first fixed point flipped (negative control)."
                      : "CP^3 with projective weights (0,1,2,3): four isolated fixed points.";
    e.provenance = corrupted ? "deliberate corruption" : "weights are differences of the projective weights";
    std::vector<std::vector<Rat>> w = {{1, 2, 3}, {-1, 1, 2}, {-2, -1, 1}, {-3, -2, -1}};
    if (corrupted) w[0][0] = -1;
    e.data = isolated_points(3, w);
    if (corrupted)
        e.expected.push_back({{OperatorKind::DsThetaPrime, Normalization::Raw}, Expectation::NotRigid});
    else
        e.expected = non_v_rigid();
    return e;
}

CatalogEntry s2xs2_birotation() {
    CatalogEntry e;
    e.name = "s2xs2-birotation";
    e.doc = "S^2 x S^2 rotating the factors at speeds 1 and 2: four isolated fixed points with weights (+-1, +-2).";
    e.provenance = "product of two rotation actions";
    e.data = isolated_points(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
    e.expected = non_v_rigid();
    e.expected.push_back(h_vanishing());
    return e;
}

CatalogEntry s2_family_base() {
    CatalogEntry e;
    e.name = "s2-family-base";
    e.doc = "s2-rotation over a base with one degree-2 generator b (cap 4); normal roots shifted by b, V = N + trivial line.";
    e.provenance = "constructed family example for the weight shift of degree-2 components";
    ActionData& d = e.data;
    d.k = 1;
    d.l = 2;
    d.base_table = make_table({"b"});
    d.base_cap = 4;
    d.components.push_back(make_component("north", d, 0, {}, {}, {line(1, {{"b", 1}})}, {line(1, {{"b", 1}}), line(0)}, {}));
    d.components.push_back(make_component("south", d, 0, {}, {}, {line(-1, {{"b", -1}})}, {line(-1, {{"b", -1}}), line(0)}, {}));
    e.expected = non_v_rigid();
    e.expected.push_back(h_vanishing());
    append(e.expected, v_kinds(Expectation::JacobiForm));
    return e;
}

CatalogEntry s2_v_double_tangent() {
    CatalogEntry e;
    e.name = "s2-v-double-tangent";
    e.doc = "s2-rotation with V = TX + TX (weights +-1 at rank 2): anomaly 1.";
    e.provenance = "V chosen so that the V and tangent first Pontryagin classes differ by one unit";
    ActionData& d = e.data;
    d.k = 1;
    d.l = 2;
    d.components.push_back(make_component("north", d, 0, {}, {}, {line(1)}, {trivial_roots(1, 2)}, {}));
    d.components.push_back(make_component("south", d, 0, {}, {}, {line(-1)}, {trivial_roots(-1, 2)}, {}));
    e.expected = non_v_rigid();
    e.expected.push_back(h_vanishing());
    append(e.expected, v_kinds(Expectation::JacobiForm));
    return e;
}

CatalogEntry s4_anomaly_two() {
    CatalogEntry e;
    e.name = "s4-anomaly-two";
    e.doc = "s4-rotation with a rank-4 V of weights (2,0,0,0) and (1,1,1,-1): anomaly 2.";
    e.provenance = "V weights chosen so that the sums of squares differ from the tangent ones by 2 at both points";
    ActionData& d = e.data;
    d.k = 2;
    d.l = 4;
    d.components.push_back(make_component("north", d, 0, {}, {}, lines({1, 1}), lines({2, 0, 0, 0}), {}));
    d.components.push_back(make_component("south", d, 0, {}, {}, lines({1, -1}), lines({1, 1, 1, -1}), {}));
    e.expected = non_v_rigid();
    append(e.expected, v_kinds(Expectation::JacobiForm));
    return e;
}

CatalogEntry s4_family_twisted() {
    CatalogEntry e;
    e.name = "s4-family-twisted";
    e.doc = "s4-rotation over a base generator b (cap 2) with twisted normal roots and a rank-4 V: anomaly 2. "
            "Meets the per-component anomaly conditions but is not a sphere bundle; its degree-2 part has poles.";
    e.provenance = "probe for the weight shift of degree-2 components; realizable sphere-bundle families give a zero degree-2 part";
    ActionData& d = e.data;
    d.k = 2;
    d.l = 4;
    d.base_table = make_table({"b"});
    d.base_cap = 2;
    d.components.push_back(make_component(
        "north", d, 0, {}, {}, {line(1, {{"b", 2}}), line(1, {{"b", 2}})},
        {line(2, {{"b", 2}}), line(0, {{"b", -1}}), line(0), line(0, {{"b", 1}})}, {}));
    d.components.push_back(make_component(
        "south", d, 0, {}, {}, {line(1, {{"b", 2}}), line(-1, {{"b", 2}})},
        {line(1, {{"b", 1}}), line(1), line(1), line(-1, {{"b", 1}})}, {}));
    return e;
}

CatalogEntry cp3_fixed_lines() {
    CatalogEntry e;
    e.name = "cp3-fixed-lines";
    e.doc = "CP^3 with projective weights (0,0,1,1): two fixed lines with normal bundle O(1)+O(1) of weight +1 and -1.";
    e.provenance = "non-isolated fixed set; integral of h over each line is 1";
    ActionData& d = e.data;
    d.k = 3;
    Roots tan = {{{"h", 2}}};
    d.components.push_back(make_component("line0", d, 1, {"h"}, tan, {line(1, {{"h", 1}}), line(1, {{"h", 1}})}, {}, {{"h", 1}}));
    d.components.push_back(make_component("line1", d, 1, {"h"}, tan, {line(-1, {{"h", 1}}), line(-1, {{"h", 1}})}, {}, {{"h", 1}}));
    e.expected = non_v_rigid();
    return e;
}

CatalogEntry cp2_fixed_line() {
    CatalogEntry e;
    e.name = "cp2-fixed-line";
    e.doc = "CP^2 with projective weights (0,0,1): an isolated point with weights (-1,-1) and a fixed line with normal O(1) of weight 1.";
    e.provenance = "non-spin control: the signature-type elliptic operator fails rigidity at q^1";
    ActionData& d = e.data;
    d.k = 2;
    d.components.push_back(make_component("point", d, 0, {}, {}, lines({-1, -1}), {}, {}));
    d.components.push_back(make_component("line", d, 1, {"h"}, {{{"h", 2}}}, {line(1, {{"h", 1}})}, {}, {{"h", 1}}));
    e.expected.push_back({{OperatorKind::DsThetaPrime, Normalization::Raw}, Expectation::NotRigid});
    return e;
}

CatalogEntry s2xs2_single() {
    CatalogEntry e;
    e.name = "s2xs2-single";
    e.doc = "S^2 x S^2 rotating the first factor only: two fixed spheres with trivial normal bundles of weight +1 and -1.";
    e.provenance = "non-isolated fixed set";
    ActionData& d = e.data;
    d.k = 2;
    Roots tan = {{{"h", 2}}};
    d.components.push_back(make_component("north-sphere", d, 1, {"h"}, tan, lines({1}), {}, {{"h", 1}}));
    d.components.push_back(make_component("south-sphere", d, 1, {"h"}, tan, lines({-1}), {}, {{"h", 1}}));
    e.expected = non_v_rigid();
    e.expected.push_back(h_vanishing());
    return e;
}

// ---- Borel–Weil oracle ----

using XSeries = QSeries<WPoly>;  // WPoly variable X = T^{1/2}

XSeries x_const(const WPoly& p, int N8) { return XSeries::constant(p, N8); }

// 1 + sign q^{a/8} X^p
XSeries lambda_factor(int a, int sign, int p, int N8) {
    return x_const(1, N8) + XSeries::monomial(a, WPoly::monomial(p, sign), N8);
}

// 1 / (1 - q^{a/8} X^p)
XSeries geometric(int a, int p, int N8) {
    XSeries s(N8);
    for (int j = 0; a * j <= N8; ++j) s.add_to(a * j, WPoly::monomial(p * j));
    return s;
}

// Witten element of op on the two-sphere as a series in powers of T^{1/2};
// v_lines copies of T make up V.
XSeries s2_witten_element(const Operator& op, int k, int l, int v_lines, int N8) {
    XSeries e = x_const(1, N8);
    const WPoly spin = WPoly::monomial(1) + WPoly::monomial(-1);
    switch (op.kind) {
        case OperatorKind::DsThetaPrime: e = e * x_const(spin, N8); break;
        case OperatorKind::DeltaVThetaPrime:
            for (int i = 0; i < v_lines; ++i) e = e * x_const(spin, N8);
            break;
        case OperatorKind::DVStarDifference:
            for (int i = 0; i < v_lines; ++i) e = e * x_const(WPoly::monomial(-1) - WPoly::monomial(1), N8);
            break;
        default: break;
    }
    int first = 0, sign = 0;
    switch (op.kind) {
        case OperatorKind::DsThetaPrime:
        case OperatorKind::DeltaVThetaPrime: first = 8, sign = 1; break;
        case OperatorKind::DThetaQ:
        case OperatorKind::DVThetaQ: first = 4, sign = -1; break;
        case OperatorKind::DThetaMinusQ:
        case OperatorKind::DVThetaMinusQ: first = 4, sign = 1; break;
        case OperatorKind::DVStarDifference: first = 8, sign = -1; break;
        case OperatorKind::WittenH: break;
    }
    if (op.kind != OperatorKind::WittenH) {
        const int lines = needs_v(op.kind) ? v_lines : 1;
        for (int a = first; a <= N8; a += 8) {
            for (int i = 0; i < lines; ++i) e = e * lambda_factor(a, sign, 2, N8) * lambda_factor(a, sign, -2, N8);
            if (op.norm == Normalization::VNormalized) {
                XSeries inv(N8);
                for (int j = 0; a * j <= N8; ++j) inv.add_to(a * j, WPoly(sign == 1 && j % 2 == 1 ? -1 : 1));
                for (int i = 0; i < 2 * l; ++i) e = e * inv;
            }
        }
    }
    for (int a = 8; a <= N8; a += 8) e = e * geometric(a, 2, N8) * geometric(a, -2, N8);
    if (op.kind == OperatorKind::WittenH || op.norm == Normalization::VNormalized) {
        // c(q)^{2k} = prod (1 - q^n)^{2k}
        for (int a = 8; a <= N8; a += 8)
            for (int i = 0; i < 2 * k; ++i) e = e * lambda_factor(a, -1, 0, N8);
    }
    return e;
}

}  // namespace

std::string expectation_name(Expectation e) {
    switch (e) {
        case Expectation::Rigid: return "rigid";
        case Expectation::Vanishing: return "vanishing";
        case Expectation::NotRigid: return "not-rigid";
        case Expectation::JacobiForm: return "jacobi-form";
    }
    return "?";
}

std::vector<std::string> builtin_names() {
    return {"s2-rotation", "s4-rotation", "cp3-weighted", "s2xs2-birotation", "s2-family-base", "s2-v-double-tangent"};
}

std::vector<std::string> extra_names() {
    return {"s4-rotation-half", "s4-anomaly-two", "s4-family-twisted", "cp3-fixed-lines",
            "cp2-fixed-line",   "s2xs2-single",   "cp3-weighted-corrupted"};
}

CatalogEntry builtin(const std::string& name) {
    if (name == "s2-rotation") return s2_rotation();
    if (name == "s4-rotation") return s4_rotation(false);
    if (name == "s4-rotation-half") return s4_rotation(true);
    if (name == "cp3-weighted") return cp3_weighted(false);
    if (name == "cp3-weighted-corrupted") return cp3_weighted(true);
    if (name == "s2xs2-birotation") return s2xs2_birotation();
    if (name == "s2-family-base") return s2_family_base();
    if (name == "s2-v-double-tangent") return s2_v_double_tangent();
    if (name == "s4-anomaly-two") return s4_anomaly_two();
    if (name == "s4-family-twisted") return s4_family_twisted();
    if (name == "cp3-fixed-lines") return cp3_fixed_lines();
    if (name == "cp2-fixed-line") return cp2_fixed_line();
    if (name == "s2xs2-single") return s2xs2_single();
    throw UnknownEntry("no catalog entry named \"" + name + "\"");
}

WPoly borel_weil_character(int k) {
    if (k == -1) return WPoly();
    if (k < -1) return -borel_weil_character(-k - 2);
    std::map<int, Rat> t;
    for (int i = 0; i <= k; ++i) t[-k + 2 * i] = 1;
    return WPoly::from_terms(t);
}

int borel_weil_calibration() {
    ActionData d = builtin("s2-rotation").data;
    std::vector<std::vector<RootBundle>> twist(2);
    for (size_t i = 0; i < 2; ++i) {
        RootBundle b;
        b.weight = d.components[i].normals[0].weight;
        b.rank = 1;
        b.roots = {Graded<Rat>(d.components[i].table, d.components[i].cap)};
        twist[i] = {b};
    }
    WRat probe = twisted_dirac_character(d, twist).degree_zero();
    const WPoly bw = borel_weil_character(1);
    for (int s = -4; s <= 4; ++s)
        if (probe == WRat(bw.shifted(s))) return s;
    throw LedgerMismatch("Borel-Weil probe " + probe.to_string() + " is not a shift of " + bw.to_string());
}

OracleCheck oracle_check_s2(const Operator& op, int N8_small) {
    OracleCheck out;
    out.N8 = N8_small;
    const bool v = needs_v(op.kind);
    CatalogEntry entry = builtin(v ? "s2-v-double-tangent" : "s2-rotation");
    out.dataset = entry.name;
    const int shift = borel_weil_calibration();
    const int v_lines = v ? entry.data.l : 0;
    XSeries elem = s2_witten_element(op, entry.data.k, entry.data.l, v_lines, N8_small);
    GenusResult res = equivariant_character(entry.data, op, N8_small);
    const QSeries<WRat> engine = res.series.degree_zero();
    for (int n = 0; n <= N8_small; ++n) {
        WPoly oracle;
        auto it = elem.coeffs().find(n);
        if (it != elem.coeffs().end())
            for (const auto& [j, c] : it->second.terms()) oracle += borel_weil_character(j - 1).shifted(shift) * c;
        WRat e = engine.coeff(n);
        if (e != WRat(oracle)) {
            out.equal = false;
            out.detail = "q^" + q_exponent_label(n) + ": engine " + e.to_string() + ", Borel-Weil " + oracle.to_string();
            return out;
        }
    }
    out.equal = true;
    std::ostringstream os;
    os << "engine and Borel-Weil sums agree to q^" << q_exponent_label(N8_small) << " on " << entry.name
       << " (calibration shift " << shift << ")";
    out.detail = os.str();
    return out;
}

}  // namespace ellgen
