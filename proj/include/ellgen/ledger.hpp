#pragma once

#include <string>

#include "ellgen/rational.hpp"

namespace ellgen {

// Symbolic prefactor (2 pi)^two_pi * i^i * 2^two * c(q)^c * q^{q8/8}, kept
// out of the rational payloads.
struct Ledger {
    int q8 = 0;
    int c = 0;
    int two_pi = 0;
    int i = 0;  // taken mod 4
    int two = 0;

    Ledger& operator*=(const Ledger& o) {
        q8 += o.q8;
        c += o.c;
        two_pi += o.two_pi;
        i = ((i + o.i) % 4 + 4) % 4;
        two += o.two;
        return *this;
    }
    friend Ledger operator*(Ledger a, const Ledger& b) { return a *= b; }
    Ledger inverse() const { return Ledger{-q8, -c, -two_pi, (4 - i) % 4, -two}; }
    Ledger pow(int n) const {
        Ledger r;
        for (int k = 0; k < (n < 0 ? -n : n); ++k) r *= *this;
        return n < 0 ? r.inverse() : r;
    }
    bool constants_equal(const Ledger& o) const {
        return two_pi == o.two_pi && ((i - o.i) % 4 + 4) % 4 == 0 && two == o.two;
    }
    friend bool operator==(const Ledger& a, const Ledger& b) {
        return a.q8 == b.q8 && a.c == b.c && a.constants_equal(b);
    }

    static Ledger of_i(int k) { return Ledger{0, 0, 0, ((k % 4) + 4) % 4, 0}; }
    static Ledger of_two_pi(int k) { return Ledger{0, 0, k, 0, 0}; }
    static Ledger of_two(int k) { return Ledger{0, 0, 0, 0, k}; }
    static Ledger of_c(int k) { return Ledger{0, k, 0, 0, 0}; }
    static Ledger of_q8(int k) { return Ledger{k, 0, 0, 0, 0}; }

    // Numeric value at tau.
    cplx value(cplx tau) const;
    std::string to_string() const;
};

}  // namespace ellgen
