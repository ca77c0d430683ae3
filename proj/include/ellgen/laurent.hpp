#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ellgen/rational.hpp"

namespace ellgen {

// Laurent polynomial in one variable with rational coefficients.
// Dense storage: coefficient of x^(lo + i) is c[i]; both ends are nonzero,
// the zero polynomial has empty c.
class WPoly {
public:
    WPoly() = default;
    WPoly(const Rat& c0);  // NOLINT: constants embed implicitly
    WPoly(int c0) : WPoly(Rat(c0)) {}
    static WPoly monomial(int e, const Rat& c = 1);
    static WPoly from_terms(const std::map<int, Rat>& terms);

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.empty() || (c_.size() == 1 && lo_ == 0); }
    bool is_monomial() const { return c_.size() == 1; }
    int low() const { return lo_; }
    int high() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    Rat coeff(int e) const;
    const std::vector<Rat>& dense() const { return c_; }
    std::map<int, Rat> terms() const;

    WPoly operator-() const;
    WPoly& operator+=(const WPoly& o);
    WPoly& operator-=(const WPoly& o);
    WPoly& operator*=(const WPoly& o);
    WPoly& operator*=(const Rat& s);
    friend WPoly operator+(WPoly a, const WPoly& b) { return a += b; }
    friend WPoly operator-(WPoly a, const WPoly& b) { return a -= b; }
    friend WPoly operator*(const WPoly& a, const WPoly& b);
    friend WPoly operator*(WPoly a, const Rat& s) { return a *= s; }
    friend bool operator==(const WPoly& a, const WPoly& b) { return a.lo_ == b.lo_ && a.c_ == b.c_; }
    friend bool operator!=(const WPoly& a, const WPoly& b) { return !(a == b); }

    WPoly shifted(int k) const;                // times x^k
    WPoly substitute_power(int k) const;       // x -> x^k (k may be negative)
    WPoly twisted_sign() const;                // x -> -x
    cplx eval(cplx x) const;
    // Exact division; returns false (and leaves out untouched) if b does not divide *this.
    bool divides_into(const WPoly& b, WPoly& out) const;

    std::string to_string(const std::string& var = "w", int resolution = 1) const;

private:
    void trim();
    int lo_ = 0;
    std::vector<Rat> c_;
};

// gcd of Laurent polynomials up to units (monomials times constants); result
// is a polynomial with nonzero constant term and leading coefficient 1.
WPoly wpoly_gcd(const WPoly& a, const WPoly& b);

// Reduced rational function num/den. Canonical form: gcd(num, den) = 1,
// den has lowest exponent 0 and leading (highest) coefficient 1.
class WRat {
public:
    WRat() : num_(), den_(1) {}
    WRat(const WPoly& p) : num_(p), den_(1) {}  // NOLINT
    WRat(const Rat& c) : num_(c), den_(1) {}    // NOLINT
    WRat(int c) : WRat(Rat(c)) {}              // NOLINT
    WRat(const WPoly& n, const WPoly& d);

    const WPoly& num() const { return num_; }
    const WPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return den_.is_constant() && num_.is_constant(); }
    Rat constant_value() const { return num_.coeff(0); }

    WRat operator-() const { return WRat(-num_, den_, true); }
    friend WRat operator+(const WRat& a, const WRat& b);
    friend WRat operator-(const WRat& a, const WRat& b) { return a + (-b); }
    friend WRat operator*(const WRat& a, const WRat& b);
    friend WRat operator/(const WRat& a, const WRat& b);
    WRat& operator+=(const WRat& o) { return *this = *this + o; }
    WRat& operator-=(const WRat& o) { return *this = *this - o; }
    WRat& operator*=(const WRat& o) { return *this = *this * o; }
    friend bool operator==(const WRat& a, const WRat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const WRat& a, const WRat& b) { return !(a == b); }

    WRat inverse() const;
    WRat substitute_power(int k) const;  // w -> w^k
    cplx eval(cplx w) const { return num_.eval(w) / den_.eval(w); }
    std::string to_string(const std::string& var = "w", int resolution = 1) const;

private:
    WRat(WPoly n, WPoly d, bool) : num_(std::move(n)), den_(std::move(d)) {}
    void reduce();
    WPoly num_, den_;
};

// Polynomial u^(2M) - 1 for M > 0; the fixed denominators of the engine.
WPoly phi_poly(int M);

// Element of the localization of Q[u, 1/u] at the polynomials phi_M.
// Stored unreduced as num / prod_M phi_M^e(M); all arithmetic is gcd-free.
class WFrac {
public:
    WFrac() = default;
    WFrac(const WPoly& p) : num_(p) {}  // NOLINT
    WFrac(const Rat& c) : num_(c) {}    // NOLINT
    WFrac(int c) : num_(Rat(c)) {}      // NOLINT
    WFrac(WPoly n, std::map<int, int> den) : num_(std::move(n)), den_(std::move(den)) { normalize(); }

    // 1/(u^(2M) - 1) for any nonzero M.
    static WFrac inv_z_minus_one(int M);

    const WPoly& num() const { return num_; }
    const std::map<int, int>& den_exponents() const { return den_; }
    WPoly den_poly() const;
    bool is_zero() const { return num_.is_zero(); }

    WFrac operator-() const { return WFrac(-num_, den_); }
    friend WFrac operator+(const WFrac& a, const WFrac& b);
    friend WFrac operator-(const WFrac& a, const WFrac& b) { return a + (-b); }
    friend WFrac operator*(const WFrac& a, const WFrac& b);
    WFrac& operator+=(const WFrac& o) { return *this = *this + o; }
    WFrac& operator-=(const WFrac& o) { return *this = *this - o; }
    WFrac& operator*=(const WFrac& o) { return *this = *this * o; }

    // Succeeds when the numerator is a constant times a monomial times a
    // product of phi's.
    bool try_invert(WFrac& out) const;
    WRat to_wrat() const { return WRat(num_, den_poly()); }
    cplx eval(cplx u) const;

private:
    void normalize();
    WPoly num_;
    std::map<int, int> den_;
};

}  // namespace ellgen
