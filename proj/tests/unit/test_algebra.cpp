#include <random>

#include "doctest.h"

#include "ellgen/graded.hpp"
#include "ellgen/laurent.hpp"
#include "ellgen/qseries.hpp"

using namespace ellgen;

namespace {

std::mt19937 rng(20240601);

Rat rand_rat() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    return make_rat(num(rng), den(rng));
}

WPoly rand_wpoly(int span = 3) {
    std::map<int, Rat> t;
    std::uniform_int_distribution<int> e(-span, span), n(1, 3);
    for (int i = n(rng); i-- > 0;) t[e(rng)] += rand_rat();
    return WPoly::from_terms(t);
}

WRat rand_wrat() {
    WPoly d;
    while (d.is_zero()) d = rand_wpoly(2);
    return WRat(rand_wpoly(), d);
}

QSeries<Rat> rand_series(int N8, int v = 0) {
    QSeries<Rat> s(N8);
    std::uniform_int_distribution<int> step(1, 4);
    for (int n = v; n <= N8; n += step(rng)) s.set(n, rand_rat());
    return s;
}

QSeries<Rat> poly_q(std::initializer_list<std::pair<int, int>> terms, int N8) {
    QSeries<Rat> s(N8);
    for (auto [n, c] : terms) s.add_to(n, Rat(c));
    return s;
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("rationals are canonical and parse exactly") {
    Rat r = make_rat(6, -4);
    CHECK(r.get_num() == -3);
    CHECK(r.get_den() == 2);
    CHECK(rat_to_string(r) == "-3/2");
    CHECK(rat_from_string(" 10/4 ") == make_rat(5, 2));
    CHECK(rat_from_string("-7") == -7);
    CHECK_THROWS_AS(rat_from_string("1.5"), ParseError);
    CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
    CHECK(factorial(6) == 720);
}

TEST_CASE("series_mul examples") {
    const int N8 = 16;
    auto a = poly_q({{0, 1}, {8, 1}}, N8), b = poly_q({{0, 1}, {8, -1}}, N8);
    CHECK(a * b == poly_q({{0, 1}, {16, -1}}, N8));
    CHECK(a * QSeries<Rat>::constant(1) == a);
    QSeries<Rat> prod = QSeries<Rat>::constant(1, 48);
    for (int n = 1; n <= 3; ++n) prod *= poly_q({{0, 1}, {8 * n, -1}}, 48);
    CHECK(prod == poly_q({{0, 1}, {8, -1}, {16, -1}, {32, 1}, {40, 1}, {48, -1}}, 48));
}

TEST_CASE("truncation is tracked through arithmetic") {
    auto a = rand_series(10), b = rand_series(24);
    CHECK((a * b).N8() == 10);
    CHECK((a + b).N8() == 10);
    CHECK_THROWS_AS(a.coeff(11), DegreeOutOfRange);
    CHECK(a.shifted(3).N8() == 13);
}

TEST_CASE("series_invert examples") {
    auto inv = series_invert(poly_q({{0, 1}, {8, -1}}, 40));
    for (int n = 0; n <= 40; ++n) CHECK(inv.coeff(n) == (n % 8 == 0 ? 1 : 0));
    auto m = series_invert(QSeries<Rat>::monomial(1, Rat(1), 40));
    CHECK(m.coeffs().size() == 1);
    CHECK(m.coeffs().begin()->first == -1);
    // 1 - q z with coefficients in w-rationals (z = w^2)
    QSeries<WRat> s(32);
    s.set(0, WRat(1));
    s.set(8, WRat(WPoly::monomial(2, -1)));
    auto g = series_invert(s);
    for (int n = 0; n <= 4; ++n) CHECK(g.coeff(8 * n) == WRat(WPoly::monomial(2 * n)));
    CHECK(g.coeff(4).is_zero());
    CHECK_THROWS_AS(series_invert(QSeries<Rat>(8)), NonInvertibleLeadingCoefficient);
    QSeries<WPoly> bad(8);
    bad.set(0, WPoly::monomial(1) + WPoly(1));
    bad.set(8, WPoly(1));
    WPoly tmp;
    CHECK_FALSE(Ring<WPoly>::invert(bad.coeff(0), tmp));
}

TEST_CASE("series_invert then series_mul is the identity for random series") {
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> val(-3, 3);
        int v = val(rng);
        auto a = rand_series(32 + v, v);
        if (a.coeff(v) == 0) a.set(v, 1);
        auto inv = series_invert(a);
        CHECK(inv.valuation() == -v);
        auto prod = a * inv;
        for (int n = 0; n <= prod.N8(); ++n) REQUIRE(prod.coeff(n) == (n == 0 ? 1 : 0));
        CHECK(prod.N8() >= 32 - 2 * std::abs(v) - 3);
    }
}

TEST_CASE("ring axioms on random elements") {
    for (int trial = 0; trial < 40; ++trial) {
        auto a = rand_wpoly(), b = rand_wpoly(), c = rand_wpoly();
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        auto x = rand_wrat(), y = rand_wrat(), z = rand_wrat();
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + y == y + x);
        auto p = rand_series(16), q = rand_series(16), r = rand_series(16);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK(p * q == q * p);
    }
}

TEST_CASE("WLaurentRational reduction is canonical") {
    for (int trial = 0; trial < 60; ++trial) {
        WPoly a = rand_wpoly(), b, c = rand_wpoly(), d;
        while (b.is_zero()) b = rand_wpoly(2);
        while (d.is_zero()) d = rand_wpoly(2);
        bool cross = (a * d - c * b).is_zero();
        CHECK((WRat(a, b) == WRat(c, d)) == cross);
        WPoly k;
        while (k.is_zero()) k = rand_wpoly(1);
        CHECK(WRat(a * k, b * k) == WRat(a, b));
        WRat r(a, b);
        CHECK(r.den().low() == 0);
        CHECK(r.den().coeff(r.den().high()) == 1);
    }
    WRat s(WPoly::monomial(2) - WPoly(1), WPoly::monomial(1) - WPoly(1));
    CHECK(s == WRat(WPoly::monomial(1) + WPoly(1)));
    CHECK(s.is_polynomial());
}

TEST_CASE("localized fractions agree with reduced rationals") {
    for (int trial = 0; trial < 30; ++trial) {
        WFrac a(rand_wpoly(), {{1, 1}}), b(rand_wpoly(), {{2, 1}, {1, 2}});
        CHECK((a * b).to_wrat() == a.to_wrat() * b.to_wrat());
        CHECK((a + b).to_wrat() == a.to_wrat() + b.to_wrat());
    }
    WFrac inv = WFrac::inv_z_minus_one(1);
    CHECK((inv * WFrac(WPoly::monomial(2) - WPoly(1))).to_wrat() == WRat(1));
}

TEST_CASE("graded_mul examples") {
    auto t = make_table({"x", "y"});
    auto x2 = Graded<Rat>::generator(t, 2, 0);
    CHECK((x2 * x2).is_zero());
    auto one = Graded<Rat>::constant(t, 4, 1);
    auto x = Graded<Rat>::generator(t, 4, 0), y = Graded<Rat>::generator(t, 4, 1);
    CHECK(x * one == x);
    auto s = (x + y) * (x + y);
    CHECK(s.coeff({2, 0}) == 1);
    CHECK(s.coeff({1, 1}) == 2);
    CHECK(s.coeff({0, 2}) == 1);
    CHECK(s.terms().size() == 3);
    auto other = Graded<Rat>::generator(make_table({"z"}), 4, 0);
    CHECK_THROWS_AS(x * other, GeneratorTableMismatch);
    CHECK_THROWS_AS(x * Graded<Rat>::generator(t, 6, 0), GeneratorTableMismatch);
}

TEST_CASE("graded_exp examples and the exponential law") {
    auto t = make_table({"x", "b"});
    Graded<Rat> zero(t, 4);
    CHECK(graded_exp(zero) == Graded<Rat>::constant(t, 4, 1));
    auto x = Graded<Rat>::generator(t, 4, 0), b = Graded<Rat>::generator(t, 4, 1);
    auto e = graded_exp(x);
    CHECK(e.coeff({0, 0}) == 1);
    CHECK(e.coeff({1, 0}) == 1);
    CHECK(e.coeff({2, 0}) == make_rat(1, 2));
    CHECK(e.terms().size() == 3);
    CHECK(graded_exp(x + b) == graded_exp(x) * graded_exp(b));
    auto c = x * Rat(3) + b * make_rat(-1, 2);
    CHECK(graded_exp(c) * graded_exp(-c) == Graded<Rat>::constant(t, 4, 1));
    CHECK_THROWS_AS(graded_exp(Graded<Rat>::constant(t, 4, 1)), NonNilpotentInput);
}

TEST_CASE("graded inverse") {
    auto t = make_table({"x"});
    auto one = Graded<Rat>::constant(t, 6, 1);
    auto x = Graded<Rat>::generator(t, 6, 0);
    auto a = one * Rat(2) + x;
    CHECK(graded_inverse(a) * a == one);
    CHECK_THROWS_AS(graded_inverse(x), NonInvertibleLeadingCoefficient);
}

TEST_CASE("fiber_integrate examples") {
    auto t = make_table({"b", "h"});
    const int cap = 6;
    IntegrationTable cp2{{{2}, Rat(1)}};
    auto h = Graded<Rat>::generator(t, cap, 1);
    auto base = make_table({"b"});
    auto r = fiber_integrate(h * h, {1}, {0}, cp2, 2, base, 2);
    CHECK(r == Graded<Rat>::constant(base, 2, 1));
    auto one = Graded<Rat>::constant(t, cap, 1);
    CHECK(fiber_integrate(one, {1}, {0}, cp2, 2, base, 2).is_zero());
    auto pt = make_table({"b"});
    auto bb = Graded<Rat>::generator(pt, 2, 0) + Graded<Rat>::constant(pt, 2, 3);
    CHECK(fiber_integrate(bb, {}, {0}, {}, 0, pt, 2) == bb);
    CHECK_THROWS_AS(fiber_integrate(h * h, {1}, {0}, {}, 2, base, 2), MissingTableEntry);
}

TEST_CASE("fiber_integrate is linear and kills off-top degrees") {
    auto t = make_table({"b", "h"});
    const int cap = 6;
    IntegrationTable tab{{{2}, make_rat(3, 2)}};
    auto base = make_table({"b"});
    auto rand_el = [&] {
        Graded<Rat> g(t, cap);
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; i + j <= 3; ++j) g.add_term({i, j}, rand_rat());
        return g;
    };
    for (int trial = 0; trial < 20; ++trial) {
        auto a = rand_el(), b = rand_el();
        Rat s = rand_rat();
        auto I = [&](const Graded<Rat>& g) { return fiber_integrate(g, {1}, {0}, tab, 2, base, 2); };
        CHECK(I(a + b * s) == I(a) + I(b) * s);
        Graded<Rat> off(t, cap);
        for (const auto& [m, c] : a.terms())
            if (m[1] != 2) off.add_term(m, c);
        CHECK(I(off).is_zero());
    }
}

TEST_CASE("monomial strings round-trip") {
    auto t = make_table({"a", "b"});
    Mono m = mono_from_string(*t, "a*b^3");
    CHECK(m == Mono{1, 3});
    CHECK(mono_from_string(*t, mono_to_string(*t, m)) == m);
    CHECK(mono_from_string(*t, "1") == Mono{0, 0});
    CHECK_THROWS_AS(mono_from_string(*t, "c"), ParseError);
}

}
