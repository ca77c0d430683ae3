#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <string>
#include <utility>

#include "ellgen/errors.hpp"
#include "ellgen/laurent.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

// Per-coefficient-ring operations needed by the generic containers.
template <class C>
struct Ring;

template <>
struct Ring<Rat> {
    static Rat from_rat(const Rat& r) { return r; }
    static bool is_zero(const Rat& c) { return c == 0; }
    static bool invert(const Rat& c, Rat& out) {
        if (c == 0) return false;
        out = 1 / c;
        return true;
    }
};

template <>
struct Ring<WPoly> {
    static WPoly from_rat(const Rat& r) { return WPoly(r); }
    static bool is_zero(const WPoly& c) { return c.is_zero(); }
    static bool invert(const WPoly& c, WPoly& out) {
        if (!c.is_monomial()) return false;
        out = WPoly::monomial(-c.low(), 1 / c.coeff(c.low()));
        return true;
    }
};

template <>
struct Ring<WRat> {
    static WRat from_rat(const Rat& r) { return WRat(r); }
    static bool is_zero(const WRat& c) { return c.is_zero(); }
    static bool invert(const WRat& c, WRat& out) {
        if (c.is_zero()) return false;
        out = c.inverse();
        return true;
    }
};

template <>
struct Ring<WFrac> {
    static WFrac from_rat(const Rat& r) { return WFrac(r); }
    static bool is_zero(const WFrac& c) { return c.is_zero(); }
    static bool invert(const WFrac& c, WFrac& out) { return c.try_invert(out); }
};

template <>
struct Ring<cplx> {
    static cplx from_rat(const Rat& r) { return r.get_d(); }
    static bool is_zero(const cplx& c) { return c == 0.0; }
    static bool invert(const cplx& c, cplx& out) {
        if (c == 0.0) return false;
        out = 1.0 / c;
        return true;
    }
};

// Truncated series in q^{1/8}: key n stands for q^{n/8}. Coefficients with
// n > N8 are unknown; N8 == kExact marks an exact (finite) series.
template <class C>
class QSeries {
public:
    static constexpr int kExact = INT_MAX;

    explicit QSeries(int N8 = kExact) : N8_(N8) {}
    static QSeries constant(const C& c, int N8 = kExact) { return monomial(0, c, N8); }
    static QSeries monomial(int n, const C& c, int N8 = kExact) {
        QSeries s(N8);
        if (n <= N8 && !Ring<C>::is_zero(c)) s.c_.emplace(n, c);
        return s;
    }

    int N8() const { return N8_; }
    bool exact() const { return N8_ == kExact; }
    const std::map<int, C>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int valuation() const { return c_.empty() ? kExact : c_.begin()->first; }
    bool known(int n) const { return n <= N8_; }
    C coeff(int n) const {
        if (n > N8_) throw DegreeOutOfRange("q-exponent " + std::to_string(n) + "/8 beyond truncation " + std::to_string(N8_) + "/8");
        auto it = c_.find(n);
        return it == c_.end() ? Ring<C>::from_rat(0) : it->second;
    }

    void set(int n, const C& c) {
        if (n > N8_) return;
        if (Ring<C>::is_zero(c))
            c_.erase(n);
        else
            c_[n] = c;
    }
    void add_to(int n, const C& c) {
        if (n > N8_ || Ring<C>::is_zero(c)) return;
        auto it = c_.find(n);
        if (it == c_.end()) {
            c_.emplace(n, c);
            return;
        }
        it->second = it->second + c;
        if (Ring<C>::is_zero(it->second)) c_.erase(it);
    }

    QSeries truncated(int N8) const {
        QSeries r(std::min(N8, N8_));
        for (const auto& [n, c] : c_)
            if (n <= r.N8_) r.c_.emplace(n, c);
        return r;
    }
    // Multiply by q^{k/8}.
    QSeries shifted(int k) const {
        QSeries r(sat_add(N8_, k));
        for (const auto& [n, c] : c_) r.c_.emplace(n + k, c);
        return r;
    }
    template <class F>
    auto map(F&& f) const {
        using D = decltype(f(std::declval<const C&>()));
        QSeries<D> r(N8_);
        for (const auto& [n, c] : c_) r.set(n, f(c));
        return r;
    }

    QSeries operator-() const {
        QSeries r(N8_);
        for (const auto& [n, c] : c_) r.c_.emplace(n, -c);
        return r;
    }
    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r = a.truncated(std::min(a.N8_, b.N8_));
        for (const auto& [n, c] : b.c_) r.add_to(n, c);
        return r;
    }
    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        int va = a.valuation(), vb = b.valuation();
        int N = std::min({a.N8_, b.N8_, sat_add(a.N8_, vb), sat_add(b.N8_, va)});
        QSeries r(N);
        for (const auto& [i, x] : a.c_) {
            if (sat_add(i, vb) > N) break;
            for (const auto& [j, y] : b.c_) {
                if (i + j > N) break;
                r.add_to(i + j, x * y);
            }
        }
        return r;
    }
    friend QSeries operator*(const QSeries& a, const C& s) {
        QSeries r(a.N8_);
        for (const auto& [n, c] : a.c_) r.set(n, c * s);
        return r;
    }
    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    // Equality on the common known range.
    friend bool operator==(const QSeries& a, const QSeries& b) {
        int N = std::min(a.N8_, b.N8_);
        return a.truncated(N).c_ == b.truncated(N).c_;
    }

    static int sat_add(int a, int b) {
        if (a == kExact || b == kExact) return kExact;
        long long s = static_cast<long long>(a) + b;
        return s >= kExact ? kExact - 1 : static_cast<int>(s);
    }

private:
    int N8_;
    std::map<int, C> c_;
};

// a^{-1}; the result is known up to N8(a) - 2*val(a), and never beyond cap.
template <class C>
QSeries<C> series_invert(const QSeries<C>& a, int cap = QSeries<C>::kExact) {
    if (a.is_zero()) throw NonInvertibleLeadingCoefficient("inverse of the zero series");
    const int v = a.valuation();
    C lead_inv;
    if (!Ring<C>::invert(a.coeffs().begin()->second, lead_inv))
        throw NonInvertibleLeadingCoefficient("leading coefficient at q^" + std::to_string(v) + "/8 has no inverse");
    if (a.coeffs().size() == 1) return QSeries<C>::monomial(-v, lead_inv, std::min(cap, a.exact() ? cap : a.N8() - 2 * v));
    int N = a.exact() ? cap : std::min(cap, a.N8() - 2 * v);
    if (N == QSeries<C>::kExact)
        throw NonInvertibleLeadingCoefficient("inverse of an exact non-monomial series needs a truncation order");
    QSeries<C> b(N);
    std::map<int, C> bs;  // b_j for j >= -v
    bs.emplace(-v, lead_inv);
    for (int n = 1; n - v <= N; ++n) {
        C acc = Ring<C>::from_rat(0);
        bool any = false;
        for (auto it = std::next(a.coeffs().begin()); it != a.coeffs().end(); ++it) {
            int i = it->first;
            if (n - i < -v) break;
            auto jt = bs.find(n - i);
            if (jt == bs.end()) continue;
            acc = acc + it->second * jt->second;
            any = true;
        }
        if (!any) continue;
        C bj = -(acc * lead_inv);
        if (!Ring<C>::is_zero(bj)) bs.emplace(n - v, bj);
    }
    for (auto& [j, c] : bs) b.set(j, c);
    return b;
}

template <class C>
QSeries<C> series_mul(const QSeries<C>& a, const QSeries<C>& b) {
    return a * b;
}

template <class C>
struct Ring<QSeries<C>> {
    static QSeries<C> from_rat(const Rat& r) { return QSeries<C>::constant(Ring<C>::from_rat(r)); }
    static bool is_zero(const QSeries<C>& s) { return s.is_zero(); }
    static bool invert(const QSeries<C>& s, QSeries<C>& out) {
        if (s.is_zero()) return false;
        C tmp;
        if (!Ring<C>::invert(s.coeffs().begin()->second, tmp)) return false;
        if (s.exact() && s.coeffs().size() > 1) return false;
        out = series_invert(s);
        return true;
    }
};

// "n/8" exponent label used in reports.
inline std::string q_exponent_label(int n) { return std::to_string(n) + "/8"; }

}  // namespace ellgen
