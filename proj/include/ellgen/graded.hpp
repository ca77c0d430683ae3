#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ellgen/errors.hpp"
#include "ellgen/qseries.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

struct GenTable {
    std::vector<std::string> names;
    std::vector<int> degrees;

    int index(const std::string& name) const;  // -1 if absent
    size_t size() const { return names.size(); }
    friend bool operator==(const GenTable& a, const GenTable& b) { return a.names == b.names && a.degrees == b.degrees; }
};
using GenTablePtr = std::shared_ptr<const GenTable>;
GenTablePtr make_table(std::vector<std::string> names, std::vector<int> degrees = {});

using Mono = std::vector<int>;

int mono_degree(const GenTable& t, const Mono& m);
std::string mono_to_string(const GenTable& t, const Mono& m);
// Parses "1", "h", "h^2", "a*b^3" against the table; throws ParseError.
Mono mono_from_string(const GenTable& t, const std::string& s);

// Fiber integration table: top-degree fiber monomial -> value.
using IntegrationTable = std::map<Mono, Rat>;

// Nilpotent polynomial in even-degree generators, truncated above the cap.
template <class C>
class Graded {
public:
    Graded() = default;
    Graded(GenTablePtr t, int cap) : t_(std::move(t)), cap_(cap) {}
    static Graded constant(GenTablePtr t, int cap, const C& c) {
        Graded g(std::move(t), cap);
        g.add_term(Mono(g.t_->size(), 0), c);
        return g;
    }
    static Graded generator(GenTablePtr t, int cap, int i, const C& c = Ring<C>::from_rat(1)) {
        Graded g(std::move(t), cap);
        Mono m(g.t_->size(), 0);
        m[i] = 1;
        g.add_term(m, c);
        return g;
    }

    const GenTablePtr& table() const { return t_; }
    int cap() const { return cap_; }
    const std::map<Mono, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Mono unit() const { return Mono(t_->size(), 0); }
    C degree_zero() const {
        auto it = terms_.find(unit());
        return it == terms_.end() ? Ring<C>::from_rat(0) : it->second;
    }
    C coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Ring<C>::from_rat(0) : it->second;
    }

    void add_term(const Mono& m, const C& c) {
        if (Ring<C>::is_zero(c) || mono_degree(*t_, m) > cap_) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second = it->second + c;
        if (Ring<C>::is_zero(it->second)) terms_.erase(it);
    }

    template <class F>
    auto map(F&& f) const {
        using D = decltype(f(std::declval<const C&>()));
        Graded<D> r(t_, cap_);
        for (const auto& [m, c] : terms_) r.add_term(m, f(c));
        return r;
    }

    Graded operator-() const {
        Graded r(t_, cap_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend Graded operator+(const Graded& a, const Graded& b) {
        check_same(a, b);
        Graded r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Graded operator-(const Graded& a, const Graded& b) { return a + (-b); }
    friend Graded operator*(const Graded& a, const Graded& b) {
        check_same(a, b);
        Graded r(a.t_, a.cap_);
        Mono m(a.t_->size());
        for (const auto& [ma, ca] : a.terms_) {
            int da = mono_degree(*a.t_, ma);
            for (const auto& [mb, cb] : b.terms_) {
                if (da + mono_degree(*a.t_, mb) > a.cap_) continue;
                for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }
    friend Graded operator*(const Graded& a, const C& s) {
        Graded r(a.t_, a.cap_);
        for (const auto& [m, c] : a.terms_) r.add_term(m, c * s);
        return r;
    }
    friend bool operator==(const Graded& a, const Graded& b) {
        return a.cap_ == b.cap_ && (a.t_ == b.t_ || *a.t_ == *b.t_) && a.terms_ == b.terms_;
    }
    Graded& operator+=(const Graded& o) { return *this = *this + o; }
    Graded& operator*=(const Graded& o) { return *this = *this * o; }

    // Homogeneous part of the given degree.
    Graded homogeneous(int deg) const {
        Graded r(t_, cap_);
        for (const auto& [m, c] : terms_)
            if (mono_degree(*t_, m) == deg) r.terms_.emplace(m, c);
        return r;
    }

    static void check_same(const Graded& a, const Graded& b) {
        if (a.cap_ != b.cap_ || !(a.t_ == b.t_ || *a.t_ == *b.t_))
            throw GeneratorTableMismatch("graded elements over different generator tables or caps");
    }

private:
    GenTablePtr t_ = make_table({});
    int cap_ = 0;
    std::map<Mono, C> terms_;
};

// exp(a) for nilpotent a (no degree-0 term).
template <class C>
Graded<C> graded_exp(const Graded<C>& a) {
    if (!Ring<C>::is_zero(a.degree_zero())) throw NonNilpotentInput("graded_exp needs a vanishing degree-0 term");
    Graded<C> result = Graded<C>::constant(a.table(), a.cap(), Ring<C>::from_rat(1));
    Graded<C> power = result;
    for (int k = 1; !power.is_zero() && k <= a.cap() / 2 + 1; ++k) {
        power = power * a * Ring<C>::from_rat(Rat(1, k));
        result += power;
    }
    return result;
}

template <class C>
Graded<C> graded_mul(const Graded<C>& a, const Graded<C>& b) {
    return a * b;
}

// a^{-1} = a0^{-1} sum_j (-n a0^{-1})^j with a = a0 + n.
template <class C>
Graded<C> graded_inverse(const Graded<C>& a) {
    C a0 = a.degree_zero(), inv;
    if (!Ring<C>::invert(a0, inv)) throw NonInvertibleLeadingCoefficient("degree-0 part of a graded element is not invertible");
    Graded<C> n = a;
    n.add_term(a.unit(), -a0);
    Graded<C> step = n * (-inv);
    Graded<C> sum = Graded<C>::constant(a.table(), a.cap(), Ring<C>::from_rat(1));
    Graded<C> power = sum;
    while (true) {
        power = power * step;
        if (power.is_zero()) break;
        sum += power;
    }
    return sum * inv;
}

// sum_j jet[j] * x^j for nilpotent x.
template <class C>
Graded<C> compose(const std::vector<C>& jet, const Graded<C>& x) {
    Graded<C> acc(x.table(), x.cap());
    for (size_t j = jet.size(); j-- > 0;) {
        acc = acc * x;
        acc.add_term(x.unit(), jet[j]);
    }
    return acc;
}

template <class C, class D = C>
Graded<D> embed(const Graded<Rat>& a) {
    return a.map([](const Rat& r) { return Ring<D>::from_rat(r); });
}

// Integrate over the fiber generators (given by index in a's table). Terms
// of fiber degree != 2k are annihilated; base exponents are carried over to
// the base table (indices base_idx in a's table, in order).
template <class C>
Graded<C> fiber_integrate(const Graded<C>& a, const std::vector<int>& fiber_idx, const std::vector<int>& base_idx,
                          const IntegrationTable& table, int k, GenTablePtr base_table, int base_cap) {
    Graded<C> r(std::move(base_table), base_cap);
    const GenTable& t = *a.table();
    for (const auto& [m, c] : a.terms()) {
        Mono fm(fiber_idx.size()), bm(base_idx.size());
        int fdeg = 0;
        for (size_t i = 0; i < fiber_idx.size(); ++i) {
            fm[i] = m[fiber_idx[i]];
            fdeg += fm[i] * t.degrees[fiber_idx[i]];
        }
        if (fdeg != 2 * k) continue;
        for (size_t i = 0; i < base_idx.size(); ++i) bm[i] = m[base_idx[i]];
        Rat val;
        if (fiber_idx.empty()) {
            val = 1;
        } else {
            auto it = table.find(fm);
            if (it == table.end()) {
                std::string name;
                for (size_t i = 0; i < fm.size(); ++i)
                    if (fm[i] > 0) name += (name.empty() ? "" : "*") + t.names[fiber_idx[i]] + (fm[i] > 1 ? "^" + std::to_string(fm[i]) : "");
                throw MissingTableEntry("no integration-table entry for fiber monomial " + name);
            }
            val = it->second;
        }
        if (val != 0) r.add_term(bm, c * Ring<C>::from_rat(val));
    }
    return r;
}

}  // namespace ellgen
