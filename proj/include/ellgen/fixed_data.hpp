#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellgen/graded.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

// Equivariant summand: rotation weight, complex rank and Chern roots
// (topological classes, one per line). Tangent parts use weight 0 and store
// one representative per +/- pair.
struct RootBundle {
    Rat weight = 0;
    int rank = 0;
    std::vector<Graded<Rat>> roots;
};

struct FixedComponent {
    std::string name;
    int k_alpha = 0;
    GenTablePtr table;  // base generators first, then the fiber generators
    int n_base = 0;
    int cap = 0;  // 2 k_alpha + base degree cap
    RootBundle tangent;
    std::vector<RootBundle> normals;
    std::vector<RootBundle> vbundles;
    IntegrationTable integration;  // keyed by fiber exponents only
    int sign = 1;

    int n_fiber() const { return static_cast<int>(table->size()) - n_base; }
    std::vector<int> fiber_indices() const;
    std::vector<int> base_indices() const;
};

struct ActionData {
    int k = 0;
    int l = 0;
    GenTablePtr base_table = make_table({});
    int base_cap = 0;
    std::vector<FixedComponent> components;
    std::optional<int> declared_anomaly;

    // 2 when some weight is a half-integer, else 1.
    int w_resolution() const;
};

// Table for a component: base generators followed by fiber generators (degree 2).
GenTablePtr component_table(const GenTable& base, const std::vector<std::string>& fiber_names);

// Linear combination of generators as a degree-2 graded element.
Graded<Rat> linear_root(const GenTablePtr& table, int cap, const std::vector<std::pair<std::string, Rat>>& terms);

// Builds a component; roots given as linear combinations, weights as rationals.
struct BundleSpec {
    Rat weight = 0;
    int rank = 1;
    std::vector<std::vector<std::pair<std::string, Rat>>> roots;  // empty: all roots zero
};
FixedComponent make_component(const std::string& name, const ActionData& data, int k_alpha,
                              const std::vector<std::string>& fiber_names,
                              const std::vector<std::vector<std::pair<std::string, Rat>>>& tangent_roots,
                              const std::vector<BundleSpec>& normals, const std::vector<BundleSpec>& vbundles,
                              const std::map<std::string, Rat>& integration, int sign = 1);

// Same data with every rotation weight negated.
ActionData negate_weights(const ActionData& data);

// V := (normal bundles) + (tangent roots at weight 0), so that p1(V) = p1(TX); l becomes k.
ActionData with_v_equal_tangent(const ActionData& data);

}  // namespace ellgen
