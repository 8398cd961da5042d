#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "biharm/bessel.hpp"
#include "biharm/gamma.hpp"
#include "oracles.hpp"

using namespace biharm;

TEST_CASE("order domain") {
    CHECK_THROWS_AS(Order(-0.6), DomainError);
    CHECK_NOTHROW(Order(-0.5));
    CHECK_THROWS_AS(bessel_j(Order(0.0), 0.0), DomainError);
    CHECK_THROWS_AS(bessel_j(Order(0.0), -1.0), DomainError);
}

TEST_CASE("half-integer closed forms") {
    // J_{-1/2}(pi) = -sqrt(2/pi^2) = -sqrt(2)/pi
    CHECK(bessel_j(Order(-0.5), M_PI) == doctest::Approx(-std::sqrt(2.0) / M_PI).epsilon(1e-13));
    CHECK(std::fabs(bessel_j(Order(0.5), M_PI)) < 1e-13);
    for (double eta : {0.3, 1.0, 7.0, 30.0, 200.0}) {
        CHECK(bessel_j(Order(-0.5), eta) ==
              doctest::Approx(std::sqrt(2.0 / (M_PI * eta)) * std::cos(eta)).epsilon(1e-14));
        CHECK(bessel_j(Order(0.5), eta) ==
              doctest::Approx(std::sqrt(2.0 / (M_PI * eta)) * std::sin(eta)).epsilon(1e-14));
    }
}

TEST_CASE("small-eta limit eta^{-mu} J_mu -> 2^{-mu}/Gamma(mu+1)") {
    for (double mu : {0.0, 1.0, 1.5, 2.0, 3.0}) {
        const double eta = 1e-6;
        const double lim = std::pow(2.0, -mu) / gamma_fn(mu + 1.0);
        CHECK(std::pow(eta, -mu) * bessel_j(Order(mu), eta) ==
              doctest::Approx(lim).epsilon(1e-9));
    }
}

TEST_CASE("series agrees with the independent oracle and across regimes") {
    for (double mu : {0.0, 1.0, 1.5, 2.0, 3.0}) {
        for (double eta : {0.5, 2.0, 8.0, 11.9}) {
            // the oracle's own rounding grows with eta; compare absolutely
            CHECK(std::fabs(bessel_j(Order(mu), eta) - oracle::bessel_series(mu, eta)) <
                  5e-11);
        }
        // regime cross-validation at identical switch-point arguments
        CHECK(std::fabs(detail::bessel_j_series(mu, 12.0) -
                        detail::bessel_j_integral(mu, 12.0)) < 2e-12);
        CHECK(std::fabs(detail::bessel_j_integral(mu, 50.0) -
                        detail::bessel_j_asymptotic(mu, 50.0)) < 2e-12);
        // midrange against the exact J_{3/2} form
        if (mu == 1.5) {
            for (double eta : {13.0, 25.0, 49.0}) {
                const double exact = std::sqrt(2.0 / (M_PI * eta)) *
                                     (std::sin(eta) / eta - std::cos(eta));
                CHECK(std::fabs(bessel_j(Order(mu), eta) - exact) < 1e-13);
            }
        }
    }
}

TEST_CASE("derivative: recurrence form and finite-difference check") {
    // J_0' = -J_1
    CHECK(bessel_j_prime(Order(0.0), 0.7) ==
          doctest::Approx(-bessel_j(Order(1.0), 0.7)).epsilon(1e-13));
    // central difference at (mu=1, eta=2), h = 1e-5
    const double h = 1e-5;
    const double fd =
        (bessel_j(Order(1.0), 2.0 + h) - bessel_j(Order(1.0), 2.0 - h)) / (2.0 * h);
    CHECK(std::fabs(bessel_j_prime(Order(1.0), 2.0) - fd) <= 1e-6);
    // at a zero of J_1 the first term of Eq-type identity vanishes
    const double z = bessel_zero(Order(1.0), 1);
    CHECK(bessel_j_prime(Order(1.0), z) ==
          doctest::Approx(-bessel_j(Order(2.0), z)).epsilon(1e-10));
}

TEST_CASE("zeros: exact half-integer values") {
    for (int k = 1; k <= 20; ++k) {
        CHECK(bessel_zero(Order(0.5), k) == doctest::Approx(k * M_PI).epsilon(1e-14));
        CHECK(bessel_zero(Order(-0.5), k) ==
              doctest::Approx((k - 0.5) * M_PI).epsilon(1e-14));
    }
    CHECK_THROWS_AS(bessel_zero(Order(0.0), 0), DomainError);
}

TEST_CASE("zeros: j_{0,1} against series bisection oracle") {
    // bracket [2, 3] on the oracle series, bisected to 1e-12
    double a = 2.0, b = 3.0;
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (a + b);
        if ((oracle::bessel_series(0.0, m) > 0.0) == (oracle::bessel_series(0.0, a) > 0.0))
            a = m;
        else
            b = m;
    }
    const double ref = 0.5 * (a + b);
    CHECK(bessel_zero(Order(0.0), 1) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(bessel_zero(Order(0.0), 1) == doctest::Approx(2.404825557695773).epsilon(1e-10));
}

TEST_CASE("zeros strictly increase and J changes sign at lobe midpoints") {
    for (double mu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        double prev = 0.0;
        int sign_prev = 0;
        for (int k = 1; k <= 25; ++k) {
            const double z = bessel_zero(Order(mu), k);
            CHECK(z > prev);
            const double mid = (k == 1) ? 0.5 * z : 0.5 * (prev + z);
            const double v = bessel_j(Order(mu), mid);
            const int sign = v > 0.0 ? 1 : -1;
            if (sign_prev != 0) CHECK(sign == -sign_prev);
            sign_prev = sign;
            prev = z;
        }
    }
}

TEST_CASE("recurrence residual over the production order set") {
    RadialGrid grid;
    grid.eta = linspace(0.02, 50.0, 600);
    for (double mu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        CHECK(verify_recurrence(Order(mu), grid) < 1e-9);
    }
    RadialGrid coarse;
    coarse.eta = linspace(1.0, 10.0, 10);
    CHECK(verify_recurrence(Order(-0.5), coarse) < 1e-10);
    RadialGrid one;
    one.eta = {1.0};
    CHECK(verify_recurrence(Order(0.0), one) < 1e-12);
}

TEST_CASE("uniform bound attained near zero; decay bound on eta >= 1") {
    for (double mu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        double sup = 0.0;
        for (double eta : logspace(1e-4, 50.0, 400))
            sup = std::max(sup, std::pow(eta, -mu) * std::fabs(bessel_j(Order(mu), eta)));
        CHECK(std::isfinite(sup));
        const double lim = std::pow(2.0, -mu) / gamma_fn(mu + 1.0);
        CHECK(sup == doctest::Approx(lim).epsilon(1e-6));
        double sup_decay = 0.0;
        for (double eta : linspace(1.0, 50.0, 800))
            sup_decay = std::max(sup_decay,
                                 std::sqrt(eta) * std::fabs(bessel_j(Order(mu), eta)));
        CHECK(sup_decay <= 1.0);
    }
}

TEST_CASE("gamma function sanity") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    for (double x : {0.125, 0.25, 1.75, 3.5, 10.3, 41.0})
        CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-2.0), DomainError);
}
