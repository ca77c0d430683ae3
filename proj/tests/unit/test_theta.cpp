#include <random>

#include "doctest.h"

#include "ellgen/genera.hpp"
#include "ellgen/theta.hpp"

using namespace ellgen;

namespace {

const double kPi = 3.14159265358979323846;
const cplx kI(0, 1);

// Rational part of the product formula, built factor by factor in u = w^{1/r}.
QSeries<WPoly> product_oracle(ThetaKind kind, int M, int N8) {
    QSeries<WPoly> s = QSeries<WPoly>::constant(WPoly(1), N8);
    auto factor = [&](int q8, const WPoly& c) {
        QSeries<WPoly> f = QSeries<WPoly>::constant(WPoly(1), N8);
        f.add_to(q8, c);
        s *= f;
    };
    for (int n = 1; 8 * n <= N8; ++n) factor(8 * n, WPoly(-1));
    WPoly up = WPoly::monomial(2 * M), down = WPoly::monomial(-2 * M);
    switch (kind) {
        case ThetaKind::Theta:
        case ThetaKind::Theta1: {
            int sg = kind == ThetaKind::Theta ? -1 : 1;
            for (int n = 1; 8 * n <= N8; ++n) {
                factor(8 * n, up * Rat(sg));
                factor(8 * n, down * Rat(sg));
            }
            s = s * (WPoly::monomial(M) + WPoly::monomial(-M) * Rat(sg));
            s = s.shifted(1).truncated(N8);
            break;
        }
        case ThetaKind::Theta2:
        case ThetaKind::Theta3: {
            int sg = kind == ThetaKind::Theta2 ? -1 : 1;
            for (int n = 1; 8 * n - 4 <= N8; ++n) {
                factor(8 * n - 4, up * Rat(sg));
                factor(8 * n - 4, down * Rat(sg));
            }
            break;
        }
    }
    return s;
}

// Classical Fourier sums: theta3 = sum q^{n^2/2} e^{2 pi i n v}, etc.
cplx fourier_oracle(ThetaKind kind, cplx v, cplx tau) {
    cplx acc = 0;
    for (int n = -40; n <= 40; ++n) {
        double a = (kind == ThetaKind::Theta || kind == ThetaKind::Theta1) ? n + 0.5 : n;
        double sign = ((kind == ThetaKind::Theta || kind == ThetaKind::Theta2) && (n % 2)) ? -1 : 1;
        acc += sign * std::exp(kI * kPi * tau * a * a + 2.0 * kI * kPi * a * v);
    }
    return kind == ThetaKind::Theta ? -kI * acc : acc;
}

cplx eval_formal(const ThetaSeries& ts, cplx t, cplx tau) {
    cplx u = std::exp(kI * kPi * t / double(ts.w_resolution)), q8 = std::exp(2.0 * kI * kPi * tau / 8.0);
    cplx acc = 0;
    for (const auto& [n, c] : ts.series.coeffs()) acc += c.eval(u) * std::pow(q8, n);
    return ts.ledger.value(tau) * acc;
}

const ThetaKind kKinds[] = {ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3};

}  // namespace

TEST_SUITE("theta") {

TEST_CASE("theta_formal matches the product expansion") {
    for (ThetaKind kind : kKinds) {
        for (Rat m : {Rat(1), Rat(2), Rat(-1), make_rat(1, 2), make_rat(-3, 2), Rat(0)}) {
            ThetaSeries ts = theta_formal(kind, m, 40);
            Rat M = m * ts.w_resolution;
            REQUIRE(rat_is_integer(M));
            auto oracle = product_oracle(kind, static_cast<int>(M.get_num().get_si()), 40).map([](const WPoly& p) { return WRat(p); });
            CAPTURE(theta_kind_name(kind));
            CAPTURE(rat_to_string(m));
            CHECK(ts.series == oracle);
            CHECK(ts.ledger.constants_equal(kind == ThetaKind::Theta ? Ledger::of_i(-1) : Ledger{}));
        }
    }
}

TEST_CASE("theta leading term and nullwerte") {
    ThetaSeries th = theta_formal(ThetaKind::Theta, 1, 9);
    CHECK(th.series.valuation() == 1);
    CHECK(th.series.coeff(1) == WRat(WPoly::monomial(1) - WPoly::monomial(-1)));
    CHECK(theta_formal(ThetaKind::Theta, 0, 40).series.is_zero());
    ThetaSeries t3 = theta_formal(ThetaKind::Theta3, 0, 64), t2 = theta_formal(ThetaKind::Theta2, 0, 64);
    for (int n8 = 0; n8 <= 64; ++n8) {
        int expect3 = 0, expect2 = 0;
        for (int n = -4; n <= 4; ++n)
            if (4 * n * n == n8) {
                expect3 += 1;
                expect2 += n % 2 ? -1 : 1;
            }
        CHECK(t3.series.coeff(n8) == WRat(expect3));
        CHECK(t2.series.coeff(n8) == WRat(expect2));
    }
    auto lift = [](const WPoly& p) { return WRat(p); };
    CHECK(t3.series == product_oracle(ThetaKind::Theta3, 0, 64).map(lift));
    CHECK(t2.series == product_oracle(ThetaKind::Theta2, 0, 64).map(lift));
}

TEST_CASE("theta_taylor entry 0 equals theta_formal") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> kd(0, 3), md(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        ThetaKind kind = kKinds[kd(rng)];
        Rat m = make_rat(md(rng), 2);
        ThetaSeries ts = theta_formal(kind, m, 24);
        ThetaTaylorStack st = theta_taylor(kind, m, 2, 24, ts.w_resolution);
        CHECK(st.derivatives[0].map([](const WPoly& p) { return WRat(p); }) == ts.series);
    }
}

TEST_CASE("normalized theta'(0) is q^{1/8} c(q)^3") {
    ThetaTaylorStack st = theta_taylor(ThetaKind::Theta, 0, 3, 40);
    CHECK(st.order1_zero);
    CHECK(st.derivatives[0].is_zero());
    auto expect = euler_power(3, 40).shifted(1).truncated(40).map([](const Rat& r) { return WPoly(r); });
    CHECK(st.derivatives[1] == expect);
    CHECK(st.normalization.constants_equal(Ledger::of_i(-1)));
}

TEST_CASE("parity of the Taylor stacks at m = 0") {
    for (ThetaKind kind : kKinds) {
        ThetaTaylorStack st = theta_taylor(kind, 0, 5, 32);
        int odd = kind == ThetaKind::Theta ? 0 : 1;
        for (int k = odd; k <= 5; k += 2) CHECK(st.derivatives[k].is_zero());
        CHECK_FALSE(st.derivatives[1 - odd].is_zero());
    }
}

TEST_CASE("formal and numeric evaluation agree") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> kd(0, 3), md(-2, 2), num(-9, 9);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(1.0, 1.6);
    for (int trial = 0; trial < 20; ++trial) {
        ThetaKind kind = kKinds[kd(rng)];
        int m = md(rng);
        cplx t(num(rng) / 10.0, num(rng) / 40.0), tau(re(rng), im(rng));
        ThetaSeries ts = theta_formal(kind, m, 64);
        cplx a = eval_formal(ts, t, tau), b = theta_numeric(kind, double(m) * t, tau, 1e-14);
        CHECK(std::abs(a - b) < 1e-11);
    }
}

TEST_CASE("theta_numeric against Fourier sums, including the S-transformed regime") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.12, 1.5), v(-0.7, 0.7);
    for (int trial = 0; trial < 40; ++trial) {
        cplx tau(re(rng), im(rng)), x(v(rng), 0.2 * v(rng));
        for (ThetaKind kind : kKinds) {
            cplx a = theta_numeric(kind, x, tau, 1e-14), b = fourier_oracle(kind, x, tau);
            CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
        }
    }
    CHECK(std::abs(theta_numeric(ThetaKind::Theta, 0, cplx(0.3, 0.9))) < 1e-15);
    CHECK_THROWS_AS(theta_numeric(ThetaKind::Theta3, 0.1, cplx(0.2, 0)), NonconvergentDomain);
    CHECK_THROWS_AS(theta_numeric(ThetaKind::Theta3, 0.1, cplx(0.2, -1)), NonconvergentDomain);
}

TEST_CASE("period and S, T examples") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.6, 1.5), v(-0.6, 0.6);
    for (int trial = 0; trial < 10; ++trial) {
        cplx tau(re(rng), im(rng)), t(v(rng), 0.1 * v(rng));
        const double eps = 1e-12;
        CHECK(std::abs(theta_numeric(ThetaKind::Theta3, t + 1.0, tau, eps) - theta_numeric(ThetaKind::Theta3, t, tau, eps)) < 10 * eps);
        CHECK(std::abs(theta_numeric(ThetaKind::Theta, t, tau + 1.0, eps) - std::exp(kI * kPi / 4.0) * theta_numeric(ThetaKind::Theta, t, tau, eps)) <
              10 * eps);
        cplx root = std::sqrt(tau / kI), ex = std::exp(kI * kPi * t * t / tau);
        cplx lhs = theta_numeric(ThetaKind::Theta, t / tau, -1.0 / tau, eps);
        cplx rhs = -kI * root * ex * theta_numeric(ThetaKind::Theta, t, tau, eps);
        CHECK(std::abs(lhs - rhs) < 10 * eps * std::max(1.0, std::abs(rhs)));
        lhs = theta_numeric(ThetaKind::Theta1, t / tau, -1.0 / tau, eps);
        rhs = root * ex * theta_numeric(ThetaKind::Theta2, t, tau, eps);
        CHECK(std::abs(lhs - rhs) < 10 * eps * std::max(1.0, std::abs(rhs)));
        lhs = theta_numeric(ThetaKind::Theta3, t / tau, -1.0 / tau, eps);
        rhs = root * ex * theta_numeric(ThetaKind::Theta3, t, tau, eps);
        CHECK(std::abs(lhs - rhs) < 10 * eps * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("quasi-periodicity checker") {
    CHECK(check_quasi_periodicity(ThetaKind::Theta1, 1, 0, 2, 10, 1e-9).pass);
    CHECK(check_quasi_periodicity(ThetaKind::Theta, 2, 2, 0, 10, 1e-9).pass);
    auto zero = check_quasi_periodicity(ThetaKind::Theta2, 0, 2, 2, 10, 1e-9);
    CHECK(zero.pass);
    CHECK(zero.max_discrepancy == 0);
    for (ThetaKind kind : kKinds)
        for (auto [l, a, b] : {std::tuple{1, 2, 0}, std::tuple{1, 0, 2}, std::tuple{2, 2, 2}, std::tuple{-1, 2, -2}})
            CHECK(check_quasi_periodicity(kind, l, a, b, 20, 1e-9).pass);
}

TEST_CASE("the eight modular identities") {
    for (ThetaKind kind : kKinds)
        for (ModGen g : {ModGen::S, ModGen::T}) {
            LawReport r = check_modular_ST(kind, g, 20, 1e-9);
            CAPTURE(r.detail);
            CHECK(r.pass);
            CHECK(r.samples == 20);
        }
}

TEST_CASE("theta jets are Taylor coefficients") {
    cplx tau(0.1, 0.9), v(0.23, 0.05);
    const double h = 1e-4;
    for (ThetaKind kind : kKinds) {
        auto jet = theta_jet(kind, v, tau, 2);
        cplx d1 = (theta_numeric(kind, v + h, tau) - theta_numeric(kind, v - h, tau)) / (2 * h);
        cplx d2 = (theta_numeric(kind, v + h, tau) - 2.0 * theta_numeric(kind, v, tau) + theta_numeric(kind, v - h, tau)) / (h * h);
        CHECK(std::abs(jet[0] - theta_numeric(kind, v, tau)) < 1e-13);
        CHECK(std::abs(jet[1] - d1) < 1e-6);
        CHECK(std::abs(jet[2] - d2 / 2.0) < 1e-5);
    }
}

}
