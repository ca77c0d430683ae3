#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellgen/fixed_data.hpp"
#include "ellgen/genera.hpp"
#include "ellgen/localization.hpp"

namespace ellgen {

struct ModularMatrix {
    long a = 1, b = 0, c = 0, d = 1;
    long det() const { return a * d - b * c; }
    friend ModularMatrix operator*(const ModularMatrix& x, const ModularMatrix& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    ModularMatrix inverse() const { return {d, -b, -c, a}; }
    friend bool operator==(const ModularMatrix& x, const ModularMatrix& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    std::string to_string() const;
};

inline const ModularMatrix kS{0, -1, 1, 0};
inline const ModularMatrix kT{1, 1, 0, 1};

enum class ModularGroup { Gamma0_2, GammaUpper0_2, GammaTheta, SL2Z };
std::string group_name(ModularGroup g);

bool subgroup_member(const ModularMatrix& g, ModularGroup group);
std::vector<ModularMatrix> group_generators(ModularGroup group);

struct JacobiFormSpec {
    Rat index = 0;
    int weight = 0;
    bool lattice_2z = true;  // (2Z)^2, otherwise Z^2
    ModularGroup group = ModularGroup::SL2Z;
};

using NumericFn = std::function<cplx(cplx t, cplx tau)>;

// (F|g)(t, tau) = (c tau + d)^{-l} e^{-2 pi i m c t^2/(c tau + d)} F(t/(c tau + d), g tau).
NumericFn slash_action(NumericFn F, const ModularMatrix& g, const JacobiFormSpec& spec);

struct JacobiReport {
    bool pass = false;
    double max_modular = 0;  // largest discrepancy of F|g = F
    double max_lattice = 0;  // largest discrepancy of the lattice law
    int samples = 0;
    int skipped = 0;  // samples dropped near poles
    std::string detail;
};
// Discrepancy |x - y| / max(1, |x|, |y|) over random samples with Im tau in
// [0.6, 1.4]; the lattice law is compared with the automorphy factor moved to
// the shifted side.
JacobiReport check_jacobi(const NumericFn& F, const JacobiFormSpec& spec, const std::vector<ModularMatrix>& generators,
                          const std::vector<std::pair<int, int>>& lattice_vectors, int samples, double eps,
                          uint64_t seed = 7);

struct ZeroCount {
    bool identically_zero = false;
    double count = 0;
    double max_abs = 0;
    int perturbations = 0;
    int panels = 0;
};
// (1/2 pi i) of the contour integral of F'/F around origin + [0,1] v1 + [0,1] v2;
// the origin moves up to 3 times when a zero lies on the contour.
ZeroCount count_zeros(const NumericFn& F, cplx tau, cplx origin, cplx v1, cplx v2, double eps = 1e-10);

// Group, index and weight attached to op for the degree-2p component; raw V
// operators map to their v-normalized form. n is anomaly_index(data).
struct Designation {
    Operator op;
    JacobiFormSpec spec;
    std::string note;
};
Designation designate(const Operator& op, int k, int l, int n, int p);

// Degree-2p base component of F at a given base monomial, by direct numeric evaluation.
NumericFn component_function(const ActionData& data, const Operator& op, const Mono& mono, double eps = 1e-14);

enum class IndexClass { RigidByZeroIndex, VanishesByNegativeIndex, PositiveIndexJacobiForm };
std::string index_class_name(IndexClass c);
struct IndexVerdict {
    IndexClass cls;
    bool series_zero = false;
    bool confirmed = false;      // rigid for n = 0, zero for n < 0, holomorphic for n > 0
    bool contradiction = false;  // n < 0 with a nonzero series
    std::string detail;
};
IndexVerdict rigidity_verdict_from_index(int n, const GenusResult& result);

}  // namespace ellgen
