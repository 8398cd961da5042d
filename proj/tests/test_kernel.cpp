#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "biharm/gamma.hpp"
#include "biharm/kernel.hpp"
#include "oracles.hpp"

using namespace biharm;

TEST_CASE("small-eta limit of f_N") {
    // N=1: sqrt(2) Gamma(1/4) / (4 sqrt(pi)); N=2: sqrt(pi)/4
    CHECK(f_profile_limit0(1) ==
          doctest::Approx(std::sqrt(2.0) * gamma_fn(0.25) / (4.0 * std::sqrt(M_PI)))
              .epsilon(1e-13));
    CHECK(f_profile_limit0(2) == doctest::Approx(std::sqrt(M_PI) / 4.0).epsilon(1e-13));
    // quadrature approaches the limit
    for (int dim : {1, 2, 3}) {
        CHECK(f_profile(dim, 1e-3, 1e-12) ==
              doctest::Approx(f_profile_limit0(dim)).epsilon(1e-5));
    }
}

TEST_CASE("f_profile against an independent oracle at moderate eta") {
    // first form of the profile: eta^{1-N} int e^{-s^4} (eta s)^{N/2} J(eta s) ds
    for (int dim : {1, 2, 3}) {
        for (double eta : {0.5, 2.0, 4.0}) {
            const double mu = 0.5 * (dim - 2);
            auto f = [&](double s) {
                const double z = eta * s;
                const double j = (dim == 1)
                                     ? std::sqrt(2.0 / (M_PI * z)) * std::cos(z)
                                     : oracle::bessel_series(mu, z);
                return std::exp(-std::pow(s, 4.0)) * std::pow(z, 0.5 * dim) * j;
            };
            const double direct =
                std::pow(eta, 1.0 - dim) * oracle::adaptive_simpson(f, 1e-13, 3.5, 1e-14);
            CHECK(f_profile(dim, eta, 1e-11) == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("kernel value, scaling, and limits") {
    // G(2, 16) = G(1,1)/2 for N=1 (lambda = 2)
    CHECK(kernel_value(1, 2.0, 16.0) ==
          doctest::Approx(0.5 * kernel_value(1, 1.0, 1.0)).epsilon(1e-9));
    // x = 0, t = 1: alpha_1 f_1(0+)
    CHECK(kernel_value(1, 0.0, 1.0) ==
          doctest::Approx(alpha_n(1) * f_profile_limit0(1)).epsilon(1e-13));
    CHECK_THROWS_AS(kernel_value(1, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(kernel_value(1, 1.0, -2.0), DomainError);
}

TEST_CASE("mass of the kernel is 1") {
    for (int dim : {1, 2, 3}) {
        KernelProfile prof = KernelProfile::build(dim);
        const double area = 2.0 * std::pow(M_PI, 0.5 * dim) / gamma_fn(0.5 * dim);
        for (double t : {0.1, 1.0, 10.0}) {
            auto g = [&](double r) {
                return prof.kernel(r, t) * std::pow(r, dim - 1.0);
            };
            const double rmax = prof.eta.back() * std::pow(t, 0.25);
            const double mass = area * oracle::adaptive_simpson(g, 1e-12, rmax, 1e-10);
            CHECK(mass == doctest::Approx(1.0).epsilon(2e-6));
        }
    }
}

TEST_CASE("derivative identity f_N' = -eta f_{N+2}") {
    std::vector<double> grid = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(derivative_identity_residual(1, grid) <= 1e-5);
    CHECK(derivative_identity_residual(3, {1.0}) <= 1e-5);
    // near 0 the profile is even, so the residual collapses
    CHECK(derivative_identity_residual(2, {0.01}) <= 1e-5);
}

TEST_CASE("sign changes") {
    auto z1 = sign_changes(1, 20.0);
    CHECK(z1.size() >= 3);
    for (std::size_t i = 1; i < z1.size(); ++i) CHECK(z1[i] > z1[i - 1]);
    auto z3 = sign_changes(3, 20.0);
    CHECK(!z3.empty());
    for (std::size_t i = 1; i < z3.size(); ++i) CHECK(z3[i] > z3[i - 1]);
    CHECK(sign_changes(1, 0.1).empty());
}

TEST_CASE("decay envelope holds with the fitted constants") {
    for (int dim : {1, 2, 3}) {
        DecayFit fit = fit_decay(dim);
        CHECK(fit.c1 > 0.0);
        CHECK(fit.c2 > 0.0);
        for (double eta = 5.0; eta <= 15.0; eta += 0.31) {
            const double f = std::fabs(f_profile(dim, eta, 1e-12));
            CHECK(std::log(f + 1e-300) <=
                  std::log(fit.c1) - fit.c2 * std::pow(eta, 4.0 / 3.0) + 1e-9);
        }
    }
}

TEST_CASE("profile tabulation interpolates accurately") {
    KernelProfile prof = KernelProfile::build(1);
    for (double eta : {0.013, 0.71, 2.34, 5.5, 11.2}) {
        CHECK(prof.value(eta) == doctest::Approx(f_profile(1, eta, 1e-12)).epsilon(1e-6));
    }
    CHECK(prof.value(1e9) == 0.0);
    CHECK(prof.decay.c2 > 0.0);
}
