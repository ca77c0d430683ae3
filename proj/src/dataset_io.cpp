#include "ellgen/dataset_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ellgen/errors.hpp"

namespace ellgen {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\n\r"), b = s.find_last_not_of(" \t\n\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "/" + key + ": missing field");
    return *it;
}

int as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
    return j.get<int>();
}

Rat as_rat(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) throw ParseError(path + ": expected an integer or a \"p/q\" string");
    try {
        return rat_from_string(j.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

const Json& as_array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array");
    return j;
}

using Terms = std::vector<std::pair<std::string, Rat>>;

// "2*h - 1/2*b + x", "0", or an object {name: coefficient}.
Terms parse_root(const Json& j, const std::string& path) {
    Terms out;
    if (j.is_object()) {
        for (const auto& [name, c] : j.items()) out.emplace_back(name, as_rat(c, path + "/" + name));
        return out;
    }
    if (!j.is_string()) throw ParseError(path + ": expected a root expression string");
    std::string s = j.get<std::string>();
    if (trim(s) == "0" || trim(s).empty()) return out;
    size_t pos = 0;
    int sign = 1;
    std::string cur;
    auto flush = [&](size_t at) {
        std::string term = trim(cur);
        if (term.empty()) throw ParseError(path + ": empty term at offset " + std::to_string(at) + " in \"" + s + "\"");
        Rat c = sign;
        std::string name = term;
        if (auto star = term.find('*'); star != std::string::npos) {
            try {
                c *= rat_from_string(trim(term.substr(0, star)));
            } catch (const ParseError&) {
                throw ParseError(path + ": bad coefficient in \"" + term + "\"");
            }
            name = trim(term.substr(star + 1));
        }
        if (name.empty() || name.find_first_of(" */^") != std::string::npos)
            throw ParseError(path + ": bad generator name in \"" + term + "\"");
        out.emplace_back(name, c);
        cur.clear();
        sign = 1;
    };
    for (; pos < s.size(); ++pos) {
        char ch = s[pos];
        std::string before = trim(cur);
        if ((ch == '+' || ch == '-') && (before.empty() || (before.back() != '/' && before.back() != '*'))) {
            if (!before.empty()) flush(pos);
            sign = ch == '-' ? -sign : sign;
            continue;
        }
        cur += ch;
    }
    flush(pos);
    return out;
}

std::string root_to_string(const Graded<Rat>& root) {
    const GenTable& t = *root.table();
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < t.size(); ++i) {
        Mono m(t.size(), 0);
        m[i] = 1;
        Rat c = root.coeff(m);
        if (c == 0) continue;
        Rat a = abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (a != 1) os << rat_to_string(a) << "*";
        os << t.names[i];
    }
    return first ? "0" : os.str();
}

BundleSpec parse_bundle(const Json& j, const std::string& path) {
    BundleSpec b;
    b.weight = as_rat(field(j, "weight", path), path + "/weight");
    b.rank = as_int(field(j, "rank", path), path + "/rank");
    if (b.rank < 1) throw ParseError(path + "/rank: must be positive");
    if (j.contains("roots")) {
        const Json& roots = as_array(j.at("roots"), path + "/roots");
        for (size_t i = 0; i < roots.size(); ++i) b.roots.push_back(parse_root(roots[i], path + "/roots/" + std::to_string(i)));
        if (!b.roots.empty() && static_cast<int>(b.roots.size()) != b.rank)
            throw ParseError(path + "/roots: " + std::to_string(b.roots.size()) + " roots for rank " + std::to_string(b.rank));
    }
    return b;
}

void collect_names(const Terms& terms, const std::set<std::string>& base, std::vector<std::string>& names) {
    for (const auto& [n, c] : terms)
        if (!base.count(n) && std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
}

Json bundle_json(const RootBundle& b) {
    Json j;
    j["weight"] = rat_json(b.weight);
    j["rank"] = b.rank;
    Json roots = Json::array();
    bool all_zero = true;
    for (const auto& r : b.roots) {
        roots.push_back(root_to_string(r));
        all_zero = all_zero && r.is_zero();
    }
    if (!all_zero) j["roots"] = roots;
    return j;
}

std::string exponent_label(int e, int r) {
    Rat x(e, r);
    x.canonicalize();
    return rat_to_string(x);
}

Json wpoly_json(const WPoly& p, int r) {
    Json j = Json::object();
    for (const auto& [e, c] : p.terms()) j[exponent_label(e, r)] = rat_to_string(c);
    return j;
}

Json ledger_json(const Ledger& l) {
    Json j;
    j["q"] = q_exponent_label(l.q8);
    j["c"] = l.c;
    j["two_pi"] = l.two_pi;
    j["i"] = l.i;
    j["two"] = l.two;
    return j;
}

}  // namespace

Json rat_json(const Rat& r) {
    if (rat_is_integer(r) && r.get_num().fits_slong_p()) return Json(r.get_num().get_si());
    return Json(rat_to_string(r));
}

Json wrat_json(const WRat& x, int w_resolution) {
    Json j;
    j["num"] = wpoly_json(x.num(), w_resolution);
    j["den"] = wpoly_json(x.den(), w_resolution);
    j["text"] = x.to_string("w", w_resolution);
    return j;
}

ActionData dataset_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("/: expected a dataset object");
    if (doc.contains("format") && as_int(doc.at("format"), "/format") != kDatasetFormat)
        throw ParseError("/format: unsupported format version " + doc.at("format").dump());
    ActionData d;
    d.k = as_int(field(doc, "fiber_half_dim", ""), "/fiber_half_dim");
    d.l = doc.contains("v_half_rank") ? as_int(doc.at("v_half_rank"), "/v_half_rank") : 0;
    if (d.k < 0 || d.l < 0) throw ParseError("/fiber_half_dim: dimensions must be nonnegative");
    std::vector<std::string> base_names;
    if (doc.contains("base_generators")) {
        const Json& gens = as_array(doc.at("base_generators"), "/base_generators");
        for (size_t i = 0; i < gens.size(); ++i) {
            std::string p = "/base_generators/" + std::to_string(i);
            const Json& name = field(gens[i], "name", p);
            if (!name.is_string()) throw ParseError(p + "/name: expected a string");
            int deg = gens[i].contains("degree") ? as_int(gens[i].at("degree"), p + "/degree") : 2;
            if (deg != 2) throw InvalidDataset(p + "/degree: base generators must have degree 2");
            base_names.push_back(name.get<std::string>());
        }
    }
    d.base_table = make_table(base_names);
    d.base_cap = doc.contains("base_degree_cap") ? as_int(doc.at("base_degree_cap"), "/base_degree_cap") : 0;
    if (d.base_cap < 0 || d.base_cap % 2) throw InvalidDataset("/base_degree_cap: must be a nonnegative even integer");
    if (doc.contains("declared_anomaly") && !doc.at("declared_anomaly").is_null())
        d.declared_anomaly = as_int(doc.at("declared_anomaly"), "/declared_anomaly");
    std::set<std::string> base_set(base_names.begin(), base_names.end());

    const Json& comps = as_array(field(doc, "components", ""), "/components");
    if (comps.empty()) throw InvalidDataset("/components: at least one fixed component is required");
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        std::string p = "/components/" + std::to_string(ci);
        const Json& cj = comps[ci];
        if (!cj.is_object()) throw ParseError(p + ": expected an object");
        std::string name = cj.contains("name") && cj.at("name").is_string() ? cj.at("name").get<std::string>() : "c" + std::to_string(ci);
        int k_alpha = cj.contains("k_alpha") ? as_int(cj.at("k_alpha"), p + "/k_alpha") : 0;
        if (k_alpha < 0 || k_alpha > d.k) throw InvalidDataset(p + "/k_alpha: must lie in [0, fiber_half_dim]");
        std::vector<Terms> tangent;
        if (cj.contains("tangent_roots")) {
            const Json& tr = as_array(cj.at("tangent_roots"), p + "/tangent_roots");
            for (size_t i = 0; i < tr.size(); ++i) tangent.push_back(parse_root(tr[i], p + "/tangent_roots/" + std::to_string(i)));
            if (!tangent.empty() && static_cast<int>(tangent.size()) != k_alpha)
                throw InvalidDataset(p + "/tangent_roots: " + std::to_string(tangent.size()) + " roots for k_alpha " + std::to_string(k_alpha));
        }
        std::vector<BundleSpec> normals, vb;
        const Json& nj = as_array(field(cj, "normals", p), p + "/normals");
        for (size_t i = 0; i < nj.size(); ++i) normals.push_back(parse_bundle(nj[i], p + "/normals/" + std::to_string(i)));
        if (cj.contains("v")) {
            const Json& vj = as_array(cj.at("v"), p + "/v");
            for (size_t i = 0; i < vj.size(); ++i) vb.push_back(parse_bundle(vj[i], p + "/v/" + std::to_string(i)));
        }
        std::map<std::string, Rat> integration;
        if (cj.contains("integration_table")) {
            const Json& it = cj.at("integration_table");
            if (!it.is_object()) throw ParseError(p + "/integration_table: expected an object");
            for (const auto& [mono, val] : it.items()) integration[mono] = as_rat(val, p + "/integration_table/" + mono);
        }
        std::vector<std::string> fiber;
        if (cj.contains("fiber_generators")) {
            const Json& fj = as_array(cj.at("fiber_generators"), p + "/fiber_generators");
            for (size_t i = 0; i < fj.size(); ++i) {
                if (!fj[i].is_string()) throw ParseError(p + "/fiber_generators/" + std::to_string(i) + ": expected a string");
                fiber.push_back(fj[i].get<std::string>());
            }
        } else {
            for (const auto& t : tangent) collect_names(t, base_set, fiber);
            for (const auto* list : {&normals, &vb})
                for (const auto& b : *list)
                    for (const auto& r : b.roots) collect_names(r, base_set, fiber);
            for (const auto& [mono, v] : integration) {
                std::stringstream ss(mono);
                std::string factor;
                while (std::getline(ss, factor, '*')) {
                    std::string n = trim(factor.substr(0, factor.find('^')));
                    if (n != "1" && !base_set.count(n) && std::find(fiber.begin(), fiber.end(), n) == fiber.end()) fiber.push_back(n);
                }
            }
        }
        int sign = cj.contains("sign") ? as_int(cj.at("sign"), p + "/sign") : 1;
        if (sign != 1 && sign != -1) throw InvalidDataset(p + "/sign: must be +1 or -1");
        try {
            d.components.push_back(make_component(name, d, k_alpha, fiber, tangent, normals, vb, integration, sign));
        } catch (const InvalidDataset& e) {
            throw InvalidDataset(p + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError(p + ": " + e.what());
        }
    }
    return d;
}

ActionData dataset_from_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    return dataset_from_json(doc);
}

ActionData load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return dataset_from_text(ss.str());
}

Json dataset_to_json(const ActionData& data, const std::string& name) {
    Json doc;
    doc["format"] = kDatasetFormat;
    if (!name.empty()) doc["name"] = name;
    doc["fiber_half_dim"] = data.k;
    doc["v_half_rank"] = data.l;
    Json gens = Json::array();
    for (const auto& n : data.base_table->names) gens.push_back(Json{{"name", n}, {"degree", 2}});
    doc["base_generators"] = gens;
    doc["base_degree_cap"] = data.base_cap;
    if (data.declared_anomaly) doc["declared_anomaly"] = *data.declared_anomaly;
    Json comps = Json::array();
    for (const auto& c : data.components) {
        Json cj;
        cj["name"] = c.name;
        cj["k_alpha"] = c.k_alpha;
        Json fiber = Json::array();
        for (int i : c.fiber_indices()) fiber.push_back(c.table->names[i]);
        cj["fiber_generators"] = fiber;
        Json tangent = Json::array();
        bool tangent_zero = true;
        for (const auto& r : c.tangent.roots) {
            tangent.push_back(root_to_string(r));
            tangent_zero = tangent_zero && r.is_zero();
        }
        cj["tangent_roots"] = tangent_zero ? Json::array() : tangent;
        Json normals = Json::array();
        for (const auto& b : c.normals) normals.push_back(bundle_json(b));
        cj["normals"] = normals;
        Json v = Json::array();
        for (const auto& b : c.vbundles) v.push_back(bundle_json(b));
        cj["v"] = v;
        Json integ = Json::object();
        GenTable fiber_table;
        for (int i : c.fiber_indices()) {
            fiber_table.names.push_back(c.table->names[i]);
            fiber_table.degrees.push_back(2);
        }
        for (const auto& [m, val] : c.integration) integ[mono_to_string(fiber_table, m)] = rat_to_string(val);
        cj["integration_table"] = integ;
        cj["sign"] = c.sign;
        comps.push_back(cj);
    }
    doc["components"] = comps;
    return doc;
}

Json result_to_json(const GenusResult& result) {
    Json j;
    j["format"] = kDatasetFormat;
    j["operator"] = operator_name(result.op);
    j["order"] = q_exponent_label(result.N8);
    j["w_resolution"] = result.w_resolution;
    j["fiber_half_dim"] = result.k;
    j["v_half_rank"] = result.l;
    j["digest"] = result.digest;
    j["ledger"] = ledger_json(result.ledger);
    j["ledger_text"] = result.ledger.to_string();
    Json coeffs = Json::array();
    for (const auto& [mono, series] : result.series.terms()) {
        for (const auto& [n, c] : series.coeffs()) {
            Json e;
            e["monomial"] = mono_to_string(*result.base_table, mono);
            e["q"] = q_exponent_label(n);
            e["value"] = wrat_json(c, result.w_resolution);
            coeffs.push_back(e);
        }
    }
    j["coefficients"] = coeffs;
    return j;
}

std::string result_to_text(const GenusResult& result) {
    std::ostringstream os;
    os << "operator " << operator_name(result.op) << ", order q^(" << q_exponent_label(result.N8) << "), digest " << result.digest
       << "\n";
    os << "F = " << result.ledger.to_string() << " * series\n";
    if (result.series.is_zero()) {
        os << "all coefficients: 0\n";
        return os.str();
    }
    for (const auto& [mono, series] : result.series.terms())
        for (const auto& [n, c] : series.coeffs())
            os << "[" << mono_to_string(*result.base_table, mono) << "] q^(" << q_exponent_label(n)
               << "): " << c.to_string("w", result.w_resolution) << "\n";
    return os.str();
}

}  // namespace ellgen
