#include "ellgen/fixed_data.hpp"

#include "ellgen/errors.hpp"

namespace ellgen {

std::vector<int> FixedComponent::fiber_indices() const {
    std::vector<int> r;
    for (int i = n_base; i < static_cast<int>(table->size()); ++i) r.push_back(i);
    return r;
}

std::vector<int> FixedComponent::base_indices() const {
    std::vector<int> r;
    for (int i = 0; i < n_base; ++i) r.push_back(i);
    return r;
}

int ActionData::w_resolution() const {
    for (const auto& c : components) {
        for (const auto& b : c.normals)
            if (!rat_is_integer(b.weight)) return 2;
        for (const auto& b : c.vbundles)
            if (!rat_is_integer(b.weight)) return 2;
    }
    return 1;
}

GenTablePtr component_table(const GenTable& base, const std::vector<std::string>& fiber_names) {
    std::vector<std::string> names = base.names;
    std::vector<int> degrees = base.degrees;
    for (const auto& f : fiber_names) {
        if (base.index(f) >= 0) throw InvalidDataset("fiber generator \"" + f + "\" clashes with a base generator");
        names.push_back(f);
        degrees.push_back(2);
    }
    return make_table(std::move(names), std::move(degrees));
}

Graded<Rat> linear_root(const GenTablePtr& table, int cap, const std::vector<std::pair<std::string, Rat>>& terms) {
    Graded<Rat> g(table, cap);
    for (const auto& [name, c] : terms) {
        int i = table->index(name);
        if (i < 0) throw InvalidDataset("unknown generator \"" + name + "\" in a root");
        g += Graded<Rat>::generator(table, cap, i, c);
    }
    return g;
}

static RootBundle make_bundle(const BundleSpec& s, const GenTablePtr& t, int cap) {
    RootBundle b;
    b.weight = s.weight;
    b.rank = s.rank;
    if (s.roots.empty()) {
        b.roots.assign(s.rank, Graded<Rat>(t, cap));
    } else {
        if (static_cast<int>(s.roots.size()) != s.rank) throw InvalidDataset("bundle rank and root count disagree");
        for (const auto& r : s.roots) b.roots.push_back(linear_root(t, cap, r));
    }
    return b;
}

FixedComponent make_component(const std::string& name, const ActionData& data, int k_alpha,
                              const std::vector<std::string>& fiber_names,
                              const std::vector<std::vector<std::pair<std::string, Rat>>>& tangent_roots,
                              const std::vector<BundleSpec>& normals, const std::vector<BundleSpec>& vbundles,
                              const std::map<std::string, Rat>& integration, int sign) {
    FixedComponent c;
    c.name = name;
    c.k_alpha = k_alpha;
    c.table = component_table(*data.base_table, fiber_names);
    c.n_base = static_cast<int>(data.base_table->size());
    c.cap = 2 * k_alpha + data.base_cap;
    c.sign = sign;
    BundleSpec ts;
    ts.weight = 0;
    ts.rank = k_alpha;
    ts.roots = tangent_roots;
    c.tangent = make_bundle(ts, c.table, c.cap);
    for (const auto& n : normals) c.normals.push_back(make_bundle(n, c.table, c.cap));
    for (const auto& v : vbundles) c.vbundles.push_back(make_bundle(v, c.table, c.cap));
    auto fiber_table = make_table(fiber_names);
    for (const auto& [mono, val] : integration) c.integration[mono_from_string(*fiber_table, mono)] = val;
    return c;
}

ActionData negate_weights(const ActionData& data) {
    ActionData r = data;
    for (auto& c : r.components) {
        for (auto& b : c.normals) b.weight = -b.weight;
        for (auto& b : c.vbundles) b.weight = -b.weight;
    }
    return r;
}

ActionData with_v_equal_tangent(const ActionData& data) {
    ActionData r = data;
    r.l = data.k;
    for (auto& c : r.components) {
        c.vbundles = c.normals;
        if (c.k_alpha > 0) c.vbundles.push_back(c.tangent);
    }
    r.declared_anomaly = 0;
    return r;
}

}  // namespace ellgen
