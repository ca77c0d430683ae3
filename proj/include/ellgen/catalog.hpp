#pragma once

#include <string>
#include <vector>

#include "ellgen/fixed_data.hpp"
#include "ellgen/genera.hpp"
#include "ellgen/laurent.hpp"

namespace ellgen {

enum class Expectation { Rigid, Vanishing, NotRigid, JacobiForm };
std::string expectation_name(Expectation e);

struct ExpectedVerdict {
    Operator op;
    Expectation expect;
};

struct CatalogEntry {
    std::string name;
    std::string doc;
    std::string provenance;
    ActionData data;
    std::vector<ExpectedVerdict> expected;
};

// The six listed entries.
std::vector<std::string> builtin_names();
// Further datasets reachable by name (variants, controls, non-isolated fixed sets).
std::vector<std::string> extra_names();
// Listed or extra entry; throws UnknownEntry.
CatalogEntry builtin(const std::string& name);

// S^1-character of the index of the degree-k line bundle on the rotation
// two-sphere: w^{-k} + w^{-k+2} + ... + w^k for k >= 0, 0 for k = -1,
// -character(-k-2) below.
WPoly borel_weil_character(int k);

// Shift s with ch(Ind(D ⊗ T^{1,0})) = w^s * borel_weil_character(1) on the
// rotation two-sphere, read off the engine once.
int borel_weil_calibration();

struct OracleCheck {
    bool equal = false;
    int N8 = 0;
    std::string dataset;
    std::string detail;
};
// Expands the Witten element of op on the two-sphere into powers of T^{1/2},
// sums Borel–Weil characters and compares with equivariant_character.
// Non-V operators use s2-rotation, V operators s2-v-double-tangent.
OracleCheck oracle_check_s2(const Operator& op, int N8_small);

}  // namespace ellgen
