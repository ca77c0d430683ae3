#include "ellgen/laurent.hpp"

#include <algorithm>
#include <sstream>

#include "ellgen/errors.hpp"

namespace ellgen {

WPoly::WPoly(const Rat& c0) {
    if (c0 != 0) c_.push_back(c0);
}

WPoly WPoly::monomial(int e, const Rat& c) {
    WPoly p;
    if (c != 0) {
        p.lo_ = e;
        p.c_.push_back(c);
    }
    return p;
}

WPoly WPoly::from_terms(const std::map<int, Rat>& terms) {
    WPoly p;
    if (terms.empty()) return p;
    p.lo_ = terms.begin()->first;
    p.c_.assign(terms.rbegin()->first - p.lo_ + 1, Rat(0));
    for (const auto& [e, c] : terms) p.c_[e - p.lo_] = c;
    p.trim();
    return p;
}

void WPoly::trim() {
    size_t a = 0;
    while (a < c_.size() && c_[a] == 0) ++a;
    if (a == c_.size()) {
        c_.clear();
        lo_ = 0;
        return;
    }
    size_t b = c_.size();
    while (c_[b - 1] == 0) --b;
    if (a > 0 || b < c_.size()) c_ = std::vector<Rat>(c_.begin() + a, c_.begin() + b);
    lo_ += static_cast<int>(a);
}

Rat WPoly::coeff(int e) const {
    if (c_.empty() || e < lo_ || e > high()) return 0;
    return c_[e - lo_];
}

std::map<int, Rat> WPoly::terms() const {
    std::map<int, Rat> t;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) t.emplace(lo_ + static_cast<int>(i), c_[i]);
    return t;
}

WPoly WPoly::operator-() const {
    WPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

WPoly& WPoly::operator+=(const WPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    int lo = std::min(lo_, o.lo_), hi = std::max(high(), o.high());
    if (lo < lo_ || hi > high()) {
        std::vector<Rat> c(hi - lo + 1, Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) c[lo_ - lo + i] = c_[i];
        c_.swap(c);
        lo_ = lo;
    }
    for (size_t i = 0; i < o.c_.size(); ++i) c_[o.lo_ - lo_ + i] += o.c_[i];
    trim();
    return *this;
}

WPoly& WPoly::operator-=(const WPoly& o) { return *this += -o; }

WPoly operator*(const WPoly& a, const WPoly& b) {
    WPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.lo_ = a.lo_ + b.lo_;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
    mpq_class t;
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j] == 0) continue;
            mpq_mul(t.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
            r.c_[i + j] += t;
        }
    }
    r.trim();
    return r;
}

WPoly& WPoly::operator*=(const WPoly& o) { return *this = *this * o; }

WPoly& WPoly::operator*=(const Rat& s) {
    if (s == 0) {
        c_.clear();
        lo_ = 0;
        return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
}

WPoly WPoly::shifted(int k) const {
    WPoly r = *this;
    if (!r.is_zero()) r.lo_ += k;
    return r;
}

WPoly WPoly::substitute_power(int k) const {
    std::map<int, Rat> t;
    for (const auto& [e, c] : terms()) t[e * k] += c;
    return from_terms(t);
}

WPoly WPoly::twisted_sign() const {
    WPoly r = *this;
    for (size_t i = 0; i < r.c_.size(); ++i)
        if ((r.lo_ + static_cast<int>(i)) % 2 != 0) r.c_[i] = -r.c_[i];
    return r;
}

cplx WPoly::eval(cplx x) const {
    if (c_.empty()) return 0.0;
    cplx acc = 0.0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].get_d();
    return acc * std::pow(x, lo_);
}

bool WPoly::divides_into(const WPoly& b, WPoly& out) const {
    if (b.is_zero()) throw NonInvertibleLeadingCoefficient("division by the zero polynomial");
    if (is_zero()) {
        out = WPoly();
        return true;
    }
    // Long division from the top; Laurent shifts are absorbed in the quotient exponent.
    WPoly rem = *this;
    std::map<int, Rat> q;
    const Rat& lead = b.c_.back();
    int bspan = b.high() - b.low();
    while (!rem.is_zero() && rem.high() - rem.low() >= bspan) {
        int e = rem.high() - b.high();
        Rat c = rem.c_.back() / lead;
        q[e] = c;
        rem -= b.shifted(e) * c;
    }
    if (!rem.is_zero()) return false;
    out = from_terms(q);
    return true;
}

static std::string exponent_string(int e, int resolution) {
    Rat r(e, resolution);
    r.canonicalize();
    std::string s = rat_to_string(r);
    return r.get_den() == 1 ? s : "(" + s + ")";
}

std::string WPoly::to_string(const std::string& var, int resolution) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        const Rat& c = c_[i];
        if (c == 0) continue;
        int e = lo_ + static_cast<int>(i);
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (e == 0) {
            os << rat_to_string(a);
            continue;
        }
        if (a != 1) os << rat_to_string(a) << "*";
        os << var;
        if (e != resolution) os << "^" << exponent_string(e, resolution);
    }
    return os.str();
}

// ---- gcd over Z[x] by primitive pseudo-remainder sequences ----

namespace {

using ZPoly = std::vector<mpz_class>;  // index = degree

void ztrim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

mpz_class zcontent(const ZPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

void zprimitive(ZPoly& p) {
    ztrim(p);
    if (p.empty()) return;
    mpz_class g = zcontent(p);
    if (p.back() < 0) g = -g;
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

ZPoly to_zpoly(const WPoly& a) {
    // Drop the monomial unit, clear denominators.
    const auto& d = a.dense();
    mpz_class l = 1;
    for (const auto& c : d) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    ZPoly p(d.size());
    for (size_t i = 0; i < d.size(); ++i) {
        mpq_class t = d[i] * l;
        p[i] = t.get_num();
    }
    zprimitive(p);
    return p;
}

ZPoly zprem(ZPoly a, const ZPoly& b) {
    const size_t db = b.size() - 1;
    const mpz_class& lb = b.back();
    while (!a.empty() && a.size() - 1 >= db) {
        mpz_class la = a.back();
        size_t shift = a.size() - 1 - db;
        for (auto& c : a) c *= lb;
        for (size_t i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
        ztrim(a);
    }
    return a;
}

}  // namespace

WPoly wpoly_gcd(const WPoly& a, const WPoly& b) {
    if (a.is_zero() && b.is_zero()) return WPoly(1);
    if (a.is_zero()) return wpoly_gcd(b, b);
    if (b.is_zero()) return wpoly_gcd(a, a);
    ZPoly x = to_zpoly(a), y = to_zpoly(b);
    if (x.size() < y.size()) std::swap(x, y);
    while (y.size() > 1) {
        ZPoly r = zprem(x, y);
        zprimitive(r);
        x.swap(y);
        y.swap(r);
        if (y.empty()) break;
    }
    ZPoly g = y.empty() ? x : ZPoly{mpz_class(1)};
    if (g.size() <= 1) return WPoly(1);
    std::map<int, Rat> t;
    for (size_t i = 0; i < g.size(); ++i)
        if (g[i] != 0) t[static_cast<int>(i)] = Rat(g[i], g.back());
    return WPoly::from_terms(t);
}

// ---- WRat ----

WRat::WRat(const WPoly& n, const WPoly& d) : num_(n), den_(d) {
    if (den_.is_zero()) throw NonInvertibleLeadingCoefficient("rational function with zero denominator");
    reduce();
}

void WRat::reduce() {
    if (num_.is_zero()) {
        den_ = WPoly(1);
        return;
    }
    int k = den_.low();
    den_ = den_.shifted(-k);
    num_ = num_.shifted(-k);
    if (!den_.is_constant()) {
        WPoly g = wpoly_gcd(num_, den_);
        if (!g.is_constant()) {
            WPoly q;
            num_.divides_into(g, q);
            num_ = q;
            den_.divides_into(g, q);
            den_ = q;
            int k2 = den_.low();
            den_ = den_.shifted(-k2);
            num_ = num_.shifted(-k2);
        }
    }
    Rat lead = den_.dense().back();
    if (lead != 1) {
        Rat inv = 1 / lead;
        num_ *= inv;
        den_ *= inv;
    }
}

WRat operator+(const WRat& a, const WRat& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return WRat(a.num_ + b.num_, a.den_);
    return WRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

WRat operator*(const WRat& a, const WRat& b) {
    if (a.is_zero() || b.is_zero()) return WRat();
    if (a.is_polynomial() && b.is_polynomial()) return WRat(a.num_ * b.num_, WPoly(1), true);
    return WRat(a.num_ * b.num_, a.den_ * b.den_);
}

WRat WRat::inverse() const {
    if (is_zero()) throw NonInvertibleLeadingCoefficient("inverse of zero rational function");
    return WRat(den_, num_);
}

WRat operator/(const WRat& a, const WRat& b) { return a * b.inverse(); }

WRat WRat::substitute_power(int k) const { return WRat(num_.substitute_power(k), den_.substitute_power(k)); }

std::string WRat::to_string(const std::string& var, int resolution) const {
    if (is_polynomial()) return num_.to_string(var, resolution);
    auto wrap = [&](const WPoly& p) {
        std::string s = p.to_string(var, resolution);
        return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
}

// ---- WFrac ----

WPoly phi_poly(int M) { return WPoly::monomial(2 * M) - WPoly(1); }

static WPoly phi_power(int M, int e) {
    WPoly r(1);
    WPoly p = phi_poly(M);
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

void WFrac::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto it = den_.begin(); it != den_.end();) it = it->second == 0 ? den_.erase(it) : std::next(it);
}

WFrac WFrac::inv_z_minus_one(int M) {
    if (M > 0) return WFrac(WPoly(1), {{M, 1}});
    if (M < 0) return WFrac(WPoly::monomial(-2 * M, -1), {{-M, 1}});
    throw NonInvertibleLeadingCoefficient("u^0 - 1 is zero");
}

WPoly WFrac::den_poly() const {
    WPoly d(1);
    for (const auto& [M, e] : den_) d *= phi_power(M, e);
    return d;
}

WFrac operator+(const WFrac& a, const WFrac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return WFrac(a.num_ + b.num_, a.den_);
    std::map<int, int> common = a.den_;
    for (const auto& [M, e] : b.den_) common[M] = std::max(common[M], e);
    auto lift = [&](const WFrac& x) {
        WPoly n = x.num_;
        for (const auto& [M, e] : common) {
            auto it = x.den_.find(M);
            int have = it == x.den_.end() ? 0 : it->second;
            if (e > have) n *= phi_power(M, e - have);
        }
        return n;
    };
    return WFrac(lift(a) + lift(b), common);
}

WFrac operator*(const WFrac& a, const WFrac& b) {
    if (a.is_zero() || b.is_zero()) return WFrac();
    std::map<int, int> d = a.den_;
    for (const auto& [M, e] : b.den_) d[M] += e;
    return WFrac(a.num_ * b.num_, d);
}

bool WFrac::try_invert(WFrac& out) const {
    if (num_.is_zero()) return false;
    int s = num_.low();
    WPoly p = num_.shifted(-s);
    std::map<int, int> found;
    while (!p.is_constant()) {
        bool hit = false;
        for (int M = p.high() / 2; M >= 1; --M) {
            WPoly q;
            if (p.divides_into(phi_poly(M), q)) {
                p = q.shifted(-q.low());
                ++found[M];
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    Rat c = p.coeff(0);
    WPoly n = WPoly::monomial(-s, 1 / c);
    std::map<int, int> d;
    for (const auto& [M, e] : den_) n *= phi_power(M, e);
    for (const auto& [M, f] : found) d[M] = f;
    // Cancel common phi powers between the new numerator and denominator.
    for (auto& [M, f] : d) {
        auto it = den_.find(M);
        int e = it == den_.end() ? 0 : it->second;
        int k = std::min(e, f);
        if (k > 0) {
            WPoly q;
            n.divides_into(phi_power(M, k), q);
            n = q;
            f -= k;
        }
    }
    out = WFrac(n, d);
    return true;
}

cplx WFrac::eval(cplx u) const {
    cplx v = num_.eval(u);
    for (const auto& [M, e] : den_) v /= std::pow(std::pow(u, 2 * M) - 1.0, e);
    return v;
}

}  // namespace ellgen
