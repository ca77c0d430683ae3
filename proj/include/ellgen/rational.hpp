#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace ellgen {

using Rat = mpq_class;
using cplx = std::complex<double>;

inline Rat make_rat(long p, long q = 1) {
    Rat r(p, q);
    r.canonicalize();
    return r;
}

// "p/q", or "p" when q == 1.
std::string rat_to_string(const Rat& r);
// Accepts "p", "-p", "p/q"; throws ParseError otherwise.
Rat rat_from_string(const std::string& s);

bool rat_is_integer(const Rat& r);
double rat_to_double(const Rat& r);

Rat factorial(int n);

}  // namespace ellgen
