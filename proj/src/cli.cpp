#include "ellgen/cli.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"

#include "ellgen/catalog.hpp"
#include "ellgen/dataset_io.hpp"
#include "ellgen/errors.hpp"
#include "ellgen/jacobi.hpp"
#include "ellgen/localization.hpp"
#include "ellgen/theta.hpp"

namespace ellgen {

namespace {

constexpr int kMaxOrder = 256;
constexpr double kPi = 3.14159265358979323846;

struct Source {
    std::string input;
    std::string builtin_name;
    bool v_equals_tangent = false;
};

void add_source(CLI::App* cmd, Source& s) {
    auto* in = cmd->add_option("--input", s.input, "dataset JSON file");
    auto* bi = cmd->add_option("--builtin", s.builtin_name, "catalog entry name");
    in->excludes(bi);
    cmd->add_flag("--v-equals-tangent", s.v_equals_tangent, "replace V by the tangent data");
}

ActionData load(const Source& s) {
    ActionData d;
    if (!s.input.empty())
        d = load_dataset(s.input);
    else if (!s.builtin_name.empty())
        d = builtin(s.builtin_name).data;
    else
        throw ParseError("one of --input or --builtin is required");
    if (s.v_equals_tangent) d = with_v_equal_tangent(d);
    require_valid(d);
    return d;
}

void check_order(int N8) {
    if (N8 < 0 || N8 > kMaxOrder)
        throw DegreeOutOfRange("--order " + std::to_string(N8) + " outside [0, " + std::to_string(kMaxOrder) + "]");
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string fmt_c(cplx z) {
    std::ostringstream os;
    os << std::setprecision(15) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

std::vector<Mono> monomials_of_degree(int n_gen, int p) {
    std::vector<Mono> out;
    Mono m(n_gen, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n_gen - 1 || n_gen == 0) {
            if (n_gen == 0) {
                if (left == 0) out.push_back(m);
                return;
            }
            m[i] = left;
            out.push_back(m);
            m[i] = 0;
            return;
        }
        for (int e = left; e >= 0; --e) {
            m[i] = e;
            rec(i + 1, left - e);
        }
        m[i] = 0;
    };
    rec(0, p);
    return out;
}

int cmd_expand(const Source& src, const std::string& op_name, int N8, const std::string& format, std::ostream& out) {
    check_order(N8);
    ActionData d = load(src);
    GenusResult r = equivariant_character(d, operator_from_name(op_name), N8);
    if (format == "json")
        out << result_to_json(r).dump(2) << "\n";
    else
        out << result_to_text(r);
    return 0;
}

Json verdict_json(const GenusResult& r, const RigidityVerdict& v) {
    Json j;
    j["operator"] = operator_name(r.op);
    j["verdict"] = !v.rigid ? "not-rigid" : (r.series.is_zero() ? "vanishing" : "rigid");
    Json cs = Json::array();
    for (const auto& c : v.constants)
        cs.push_back(Json{{"monomial", mono_to_string(*r.base_table, c.mono)}, {"q", q_exponent_label(c.q8)}, {"value", rat_to_string(c.value)}});
    j["constants"] = cs;
    if (v.witness)
        j["witness"] = Json{{"monomial", mono_to_string(*r.base_table, v.witness->mono)},
                            {"q", q_exponent_label(v.witness->q8)},
                            {"value", wrat_json(v.witness->value, r.w_resolution)}};
    return j;
}

int cmd_rigidity(const Source& src, const std::string& op_name, int N8, const std::string& format, std::ostream& out) {
    check_order(N8);
    ActionData d = load(src);
    bool with_v = has_v_data(d);
    std::vector<Operator> ops;
    if (op_name == "all") {
        for (const auto& op : all_operators())
            if (op.norm == Normalization::Raw && (with_v || !needs_v(op.kind))) ops.push_back(op);
    } else {
        ops.push_back(operator_from_name(op_name));
    }
    std::optional<int> n;
    try {
        n = anomaly_index(d);
    } catch (const InconsistentAnomaly&) {
    }
    Json report;
    report["digest"] = data_digest(d);
    report["order"] = q_exponent_label(N8);
    if (n) report["anomaly"] = *n;
    Json verdicts = Json::array();
    std::ostringstream text;
    text << "order q^(" << q_exponent_label(N8) << "), digest " << data_digest(d);
    if (n) text << ", anomaly " << *n;
    text << "\n";
    for (const auto& op : ops) {
        GenusResult r = equivariant_character(d, op, N8);
        RigidityVerdict v = rigidity_check(r);
        Json j = verdict_json(r, v);
        bool index_kind = needs_v(op.kind) || op.kind == OperatorKind::WittenH;
        if (n && index_kind && (with_v || op.kind == OperatorKind::WittenH)) {
            IndexVerdict iv = rigidity_verdict_from_index(*n, r);
            j["index_class"] = index_class_name(iv.cls);
            j["index_confirmed"] = iv.confirmed;
            j["index_detail"] = iv.detail;
        }
        text << operator_name(op) << ": " << j["verdict"].get<std::string>();
        if (v.rigid && !v.constants.empty()) {
            text << "; constants";
            for (const auto& c : v.constants)
                text << " [" << mono_to_string(*r.base_table, c.mono) << "] q^(" << q_exponent_label(c.q8) << ")=" << rat_to_string(c.value);
        }
        if (v.witness)
            text << "; witness [" << mono_to_string(*r.base_table, v.witness->mono) << "] q^(" << q_exponent_label(v.witness->q8)
                 << "): " << v.witness->value.to_string("w", r.w_resolution);
        if (j.contains("index_detail")) text << "; " << j["index_class"].get<std::string>() << " (" << j["index_detail"].get<std::string>() << ")";
        text << "\n";
        verdicts.push_back(j);
    }
    report["verdicts"] = verdicts;
    if (format == "json")
        out << report.dump(2) << "\n";
    else
        out << text.str();
    return 0;
}

std::vector<std::pair<int, int>> lattice_for(const JacobiFormSpec& spec) {
    int s = spec.lattice_2z ? 2 : 1;
    return {{s, 0}, {0, s}};
}

int cmd_jacobi(const Source& src, const std::string& op_name, int two_p, int samples, double tol, const std::string& format,
               std::ostream& out) {
    ActionData d = load(src);
    if (two_p < 0 || two_p % 2 || two_p > d.base_cap)
        throw DegreeOutOfRange("--degree " + std::to_string(two_p) + " must be even and within the base cap " + std::to_string(d.base_cap));
    int n = anomaly_index(d);
    Designation des = designate(operator_from_name(op_name), d.k, d.l, n, two_p / 2);
    Json report;
    report["operator"] = operator_name(des.op);
    report["anomaly"] = n;
    report["index"] = rat_to_string(des.spec.index);
    report["weight"] = des.spec.weight;
    report["group"] = group_name(des.spec.group);
    report["degree"] = two_p;
    if (!des.note.empty()) report["note"] = des.note;
    Json comps = Json::array();
    bool all_pass = true;
    std::ostringstream text;
    text << operator_name(des.op) << ": anomaly " << n << ", index " << rat_to_string(des.spec.index) << ", weight " << des.spec.weight
         << ", group " << group_name(des.spec.group) << (des.note.empty() ? "" : " (" + des.note + ")") << "\n";
    for (const Mono& mono : monomials_of_degree(static_cast<int>(d.base_table->size()), two_p / 2)) {
        NumericFn F = component_function(d, des.op, mono);
        JacobiReport rep = check_jacobi(F, des.spec, group_generators(des.spec.group), lattice_for(des.spec), samples, tol);
        all_pass = all_pass && rep.pass;
        std::string m = mono_to_string(*d.base_table, mono);
        comps.push_back(Json{{"monomial", m},
                             {"pass", rep.pass},
                             {"max_modular", rep.max_modular},
                             {"max_lattice", rep.max_lattice},
                             {"samples", rep.samples},
                             {"skipped", rep.skipped}});
        text << "[" << m << "] " << (rep.pass ? "PASS" : "FAIL") << ": " << rep.detail << "\n";
    }
    report["components"] = comps;
    report["pass"] = all_pass;
    if (format == "json")
        out << report.dump(2) << "\n";
    else
        out << text.str();
    return 0;
}

int cmd_zeros(const Source& src, const std::string& op_name, const std::string& tau_s, const std::string& format, std::ostream& out) {
    ActionData d = load(src);
    cplx tau = parse_complex(tau_s);
    if (tau.imag() <= 0) throw NonconvergentDomain("--tau needs Im tau > 0");
    Operator op = operator_from_name(op_name);
    NumericFn F = component_function(d, op, Mono(d.base_table->size(), 0));
    cplx origin = cplx(-1.013, -0.021) - tau;
    ZeroCount z = count_zeros(F, tau, origin, 2.0, 2.0 * tau);
    Json report;
    report["operator"] = operator_name(op);
    report["tau"] = complex_json(tau);
    report["cell"] = "origin -1-tau+(-0.013-0.021i), sides 2 and 2tau";
    report["identically_zero"] = z.identically_zero;
    report["max_abs"] = z.max_abs;
    if (!z.identically_zero) {
        report["count"] = z.count;
        report["perturbations"] = z.perturbations;
    }
    if (format == "json") {
        out << report.dump(2) << "\n";
    } else {
        out << operator_name(op) << " at tau = " << fmt_c(tau) << " over the (2Z)^2 cell: ";
        if (z.identically_zero)
            out << "IdenticallyZero (max |F| on the grid " << fmt(z.max_abs) << ")\n";
        else
            out << std::fixed << std::setprecision(4) << (std::abs(z.count) < 5e-5 ? 0.0 : z.count) << " zeros (max |F| " << fmt(z.max_abs) << ")\n";
    }
    return 0;
}

cplx eval_theta_series(const ThetaSeries& ts, cplx t, cplx tau) {
    cplx u = std::exp(cplx(0, kPi) * t / static_cast<double>(ts.w_resolution));
    cplx q8 = std::exp(2.0 * kPi * cplx(0, 1) * tau / 8.0);
    cplx acc = 0;
    for (const auto& [n, c] : ts.series.coeffs()) acc += c.eval(u) * std::pow(q8, n);
    return ts.ledger.value(tau) * acc;
}

int cmd_theta(const std::string& kind_s, const std::string& t_s, const std::string& tau_s, double eps, int N8, double tol,
              bool series, const std::string& format, std::ostream& out) {
    check_order(N8);
    ThetaKind kind = theta_kind_from_name(kind_s);
    cplx t = parse_complex(t_s), tau = parse_complex(tau_s);
    if (tau.imag() <= 0) throw NonconvergentDomain("--tau needs Im tau > 0");
    ThetaSeries ts = theta_formal(kind, 1, N8);
    cplx numeric = theta_numeric(kind, t, tau, eps);
    cplx formal = eval_theta_series(ts, t, tau);
    double diff = std::abs(numeric - formal);
    Json report;
    report["kind"] = kind_s;
    report["t"] = complex_json(t);
    report["tau"] = complex_json(tau);
    report["numeric"] = complex_json(numeric);
    report["series_value"] = complex_json(formal);
    report["order"] = q_exponent_label(N8);
    report["difference"] = diff;
    report["agree"] = diff <= tol;
    if (series) {
        Json cs = Json::array();
        for (const auto& [n, c] : ts.series.coeffs()) cs.push_back(Json{{"q", q_exponent_label(n)}, {"value", wrat_json(c, ts.w_resolution)}});
        report["series"] = cs;
        report["ledger"] = ts.ledger.to_string();
    }
    if (format == "json") {
        out << report.dump(2) << "\n";
        return 0;
    }
    out << kind_s << "(" << fmt_c(t) << ", " << fmt_c(tau) << ")\n";
    out << "  numeric:          " << fmt_c(numeric) << "\n";
    out << "  series to q^(" << q_exponent_label(N8) << "): " << fmt_c(formal) << "\n";
    out << "  difference:       " << fmt(diff) << (diff <= tol ? " (agree)" : " (DISAGREE)") << "\n";
    if (series) {
        out << "  " << ts.ledger.to_string() << " *\n";
        for (const auto& [n, c] : ts.series.coeffs()) out << "  q^(" << q_exponent_label(n) << "): " << c.to_string("w", ts.w_resolution) << "\n";
    }
    return 0;
}

int cmd_catalog(const std::string& action, const std::string& name, std::ostream& out) {
    if (action == "list") {
        for (const auto& n : builtin_names()) out << n << "  " << builtin(n).doc << "\n";
        return 0;
    }
    if (action == "extras") {
        for (const auto& n : extra_names()) out << n << "  " << builtin(n).doc << "\n";
        return 0;
    }
    if (name.empty()) throw ParseError("catalog " + action + " needs an entry name");
    CatalogEntry e = builtin(name);
    if (action == "emit") {
        out << dataset_to_json(e.data, e.name).dump(2) << "\n";
        return 0;
    }
    if (action == "show") {
        out << e.name << "\n  " << e.doc << "\n  provenance: " << e.provenance << "\n  expected:";
        if (e.expected.empty()) out << " none";
        out << "\n";
        for (const auto& x : e.expected) out << "    " << operator_name(x.op) << ": " << expectation_name(x.expect) << "\n";
        return 0;
    }
    throw ParseError("unknown catalog action \"" + action + "\" (list, extras, emit, show)");
}

int cmd_validate(const Source& src, const std::string& format, std::ostream& out, std::ostream& err) {
    ActionData d;
    if (!src.input.empty())
        d = load_dataset(src.input);
    else if (!src.builtin_name.empty())
        d = builtin(src.builtin_name).data;
    else
        throw ParseError("one of --input or --builtin is required");
    if (src.v_equals_tangent) d = with_v_equal_tangent(d);
    ValidationReport v = validate(d);
    if (format == "json") {
        Json j;
        j["valid"] = v.valid;
        j["errors"] = v.errors;
        j["warnings"] = v.warnings;
        j["digest"] = data_digest(d);
        out << j.dump(2) << "\n";
    } else {
        out << v.summary() << "\n";
    }
    if (!v.valid) {
        err << "error: " << v.errors.front() << "\n";
        return static_cast<int>(ErrorClass::Validation);
    }
    return 0;
}

}  // namespace

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty complex number");
    auto num = [&](const std::string& x, double unit_default) {
        if (x.empty() || x == "+") return unit_default;
        if (x == "-") return -unit_default;
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(x, &used);
        } catch (const std::exception&) {
            throw ParseError("not a complex number: \"" + raw + "\"");
        }
        if (used != x.size()) throw ParseError("not a complex number: \"" + raw + "\"");
        return v;
    };
    char last = s.back();
    if (last != 'i' && last != 'j') return {num(s, 0), 0};
    s.pop_back();
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    if (split == std::string::npos) return {0, num(s, 1)};
    return {num(s.substr(0, split), 0), num(s.substr(split), 1)};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equivariant elliptic genera by fixed-point localization", "ellgen"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Source src;
    std::string op_name = "ds-theta-prime", format = "text", tau_s = "0.5+1.2i", kind_s = "theta3", t_s = "0.3", action, entry;
    std::string rig_op = "all";
    int N8 = 16, theta_N8 = 64, two_p = 0, samples = 32;
    double tol = 1e-8, eps = 1e-12, theta_tol = 1e-9;
    bool series = false;

    auto formats = CLI::IsMember({"text", "json"});
    auto* expand = app.add_subcommand("expand", "print the q-expansion of the equivariant character");
    add_source(expand, src);
    expand->add_option("--operator", op_name, "operator kind")->required();
    expand->add_option("--order", N8, "truncation order N8 (q-exponents n/8, n <= N8)");
    expand->add_option("--format", format)->check(formats);

    auto* rigidity = app.add_subcommand("rigidity", "rigidity verdicts per operator");
    add_source(rigidity, src);
    rigidity->add_option("--operator", rig_op, "operator kind or all");
    rigidity->add_option("--order", N8, "truncation order N8");
    rigidity->add_option("--format", format)->check(formats);

    auto* jacobi = app.add_subcommand("jacobi", "check the Jacobi transformation laws of a base-degree component");
    add_source(jacobi, src);
    jacobi->add_option("--operator", op_name, "operator kind")->required();
    jacobi->add_option("--degree", two_p, "base degree 2p");
    jacobi->add_option("--samples", samples, "random sample points");
    jacobi->add_option("--tol", tol, "discrepancy tolerance");
    jacobi->add_option("--format", format)->check(formats);

    auto* zeros = app.add_subcommand("zeros", "count zeros of the degree-0 component over the (2Z)^2 cell");
    add_source(zeros, src);
    zeros->add_option("--operator", op_name, "operator kind")->required();
    zeros->add_option("--tau", tau_s, "modular parameter");
    zeros->add_option("--format", format)->check(formats);

    auto* theta = app.add_subcommand("theta", "evaluate a theta function numerically and from its series");
    theta->add_option("--kind", kind_s)->check(CLI::IsMember({"theta", "theta1", "theta2", "theta3"}));
    theta->add_option("--t", t_s, "argument t");
    theta->add_option("--tau", tau_s, "modular parameter");
    theta->add_option("--eps", eps, "numeric tolerance");
    theta->add_option("--order", theta_N8, "series order N8");
    theta->add_option("--tol", theta_tol, "agreement tolerance");
    theta->add_flag("--series", series, "print the series coefficients");
    theta->add_option("--format", format)->check(formats);

    auto* catalog = app.add_subcommand("catalog", "list, show or emit built-in datasets");
    catalog->add_option("action", action, "list | extras | show | emit")->required();
    catalog->add_option("name", entry, "entry name");

    auto* val = app.add_subcommand("validate", "validate a dataset");
    add_source(val, src);
    val->add_option("--format", format)->check(formats);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorClass::Parse);
    }

    try {
        if (expand->parsed()) return cmd_expand(src, op_name, N8, format, out);
        if (rigidity->parsed()) return cmd_rigidity(src, rig_op, N8, format, out);
        if (jacobi->parsed()) return cmd_jacobi(src, op_name, two_p, samples, tol, format, out);
        if (zeros->parsed()) return cmd_zeros(src, op_name, tau_s, format, out);
        if (theta->parsed()) return cmd_theta(kind_s, t_s, tau_s, eps, theta_N8, theta_tol, series, format, out);
        if (catalog->parsed()) return cmd_catalog(action, entry, out);
        if (val->parsed()) return cmd_validate(src, format, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace ellgen
