#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "biharm/gamma.hpp"
#include "biharm/kernel.hpp"
#include "biharm/linear.hpp"
#include "oracles.hpp"

using namespace biharm;

TEST_CASE("closed-form constants and the gamma-product identity") {
    // A_{3,1} = sqrt(pi/2); A-tilde_{2,1/2} = Gamma(1/8)/4
    CHECK(a_limit(3, 1.0) == doctest::Approx(std::sqrt(0.5 * M_PI)).epsilon(1e-13));
    CHECK(a_tilde_limit(2, 0.5) == doctest::Approx(gamma_fn(0.125) / 4.0).epsilon(1e-13));
    for (int dim : {1, 2, 3}) {
        for (double beta : {0.2, 0.4, 0.8 * dim}) {
            CHECK(c_coeff(dim, beta) * a_limit(dim, beta) ==
                  doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(c_coeff(2, 2.0), DomainError);
    CHECK_THROWS_AS(c_coeff(2, -0.1), DomainError);
}

TEST_CASE("F approaches A at large eta (quadrature route)") {
    // closed value certified against direct quadrature of the limit integrand
    CHECK(F_value(3, 1.0, 1e3, 1e-8) ==
          doctest::Approx(std::sqrt(0.5 * M_PI)).epsilon(1e-8));
    for (int dim : {1, 2, 3}) {
        for (double beta : {0.2, 0.4}) {
            CHECK(F_value(dim, beta, 1e3, 1e-8) ==
                  doctest::Approx(a_limit(dim, beta)).epsilon(1e-8));
        }
    }
    // Richardson-style confirmation: deviation shrinks along 100*{1,2,4}
    const double a = a_limit(3, 1.0);
    const double d1 = std::fabs(F_value(3, 1.0, 100.0, 1e-10) - a);
    const double d4 = std::fabs(F_value(3, 1.0, 400.0, 1e-10) - a);
    CHECK(d4 <= d1 + 1e-12);
}

TEST_CASE("small-eta law") {
    for (int dim : {1, 2, 3}) {
        for (double beta : {0.2, 0.5}) {
            const double eta = 1e-3;
            const double got = std::pow(eta, -beta) * F_value(dim, beta, eta, 1e-10);
            CHECK(std::fabs(got - a_tilde_limit(dim, beta)) <= 1e-5);
        }
    }
    // the A-tilde integral itself against an independent quadrature
    // (1/(Gamma(N/2) 2^{(N-2)/2})) int_0^inf e^{-s^4} s^{beta-1} ds
    const double beta = 0.5;
    auto f = [&](double s) { return std::exp(-std::pow(s, 4.0)) * std::pow(s, beta - 1.0); };
    const double integral = oracle::adaptive_simpson_graded(f, 3.0, 1e-12) +
                            oracle::adaptive_simpson(f, 3.0, 6.0, 1e-14);
    const double expect = integral / (gamma_fn(1.0) * 1.0);  // N = 2
    CHECK(a_tilde_limit(2, beta) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("F domain handling") {
    CHECK_THROWS_AS(F_value(3, 3.0, 1.0), DomainError);
    CHECK_NOTHROW(F_value(3, 3.0, 1.0, 1e-8, true));
    CHECK_THROWS_AS(F_value(3, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(F_value(3, 1.0, 0.0), DomainError);
}

TEST_CASE("positivity on the threshold scan grid for N=3, beta=2") {
    for (double eta : logspace(1e-2, 1e2, 40))
        CHECK(F_value(3, 2.0, eta, 1e-9) > 0.0);
}

TEST_CASE("recurrence residual and the vanishing extra term") {
    CHECK(F_recurrence_residual(1, 0.5, 1.0) <= 1e-8);
    CHECK(F_recurrence_residual(2, 1.0, 2.0) <= 1e-8);
    CHECK(F_recurrence_residual(3, 1.0, 5.0) <= 1e-8);
    const double t25 = std::fabs(F_recurrence_extra_term(3, 1.0, 25.0));
    const double t50 = std::fabs(F_recurrence_extra_term(3, 1.0, 50.0));
    const double t100 = std::fabs(F_recurrence_extra_term(3, 1.0, 100.0));
    CHECK(t50 <= 1e-3);
    CHECK(t50 < t25);
    CHECK(t100 < t50);
}

TEST_CASE("linear solution: datum recovery, x=0 law, scaling") {
    // t -> 0 recovers |x|^{-beta}
    CHECK(linear_solution(3, 1.0, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(linear_solution(3, 1.0, 2.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-7));
    // x = 0: c A-tilde t^{-beta/4}
    const double t = 0.7;
    CHECK(linear_solution(2, 0.5, 0.0, t) ==
          doctest::Approx(c_coeff(2, 0.5) * a_tilde_limit(2, 0.5) * std::pow(t, -0.125))
              .epsilon(1e-9));
    // self-similar scaling u(3x, 81t) = 3^{-beta} u(x,t), beta = 1/4
    const double u1 = linear_solution(1, 0.25, 1.0, 1.0);
    const double u2 = linear_solution(1, 0.25, 3.0, 81.0);
    CHECK(u2 == doctest::Approx(std::pow(3.0, -0.25) * u1).epsilon(1e-9));
    CHECK_THROWS_AS(linear_solution(1, 0.25, 1.0, 0.0), DomainError);
}

TEST_CASE("profile interpolation is consistent with direct quadrature") {
    SelfSimilarProfile p = SelfSimilarProfile::build(3, 1.0);
    CHECK(p.c * p.A == doctest::Approx(1.0).epsilon(1e-8));
    for (double eta : {0.0123, 0.37, 1.9, 23.0, 480.0}) {
        CHECK(p.F_at(eta) == doctest::Approx(F_value(3, 1.0, eta, 1e-11)).epsilon(1e-6));
    }
    // solution through the profile matches the direct path
    for (double x : {0.1, 1.0, 7.0}) {
        CHECK(p.solution(x, 0.9) ==
              doctest::Approx(linear_solution(3, 1.0, x, 0.9)).epsilon(1e-6));
    }
}

TEST_CASE("certificates at the paper thresholds") {
    PositivityReport r31 = certify_positivity(3, 2.0);
    CHECK(r31.verdict == Verdict::CertifiedPositive);
    CHECK(r31.method == Method::LobeMonotonicity);
    CHECK(r31.beta0 == doctest::Approx(2.0));

    PositivityReport r1 = certify_positivity(1, 7.0 / 16.0);
    CHECK(r1.verdict == Verdict::CertifiedPositive);
    CHECK(r1.method == Method::N1MonotoneMap);

    PositivityReport r2 = certify_positivity(2, 0.5);
    CHECK(r2.verdict == Verdict::CertifiedPositive);
    CHECK(r2.method == Method::N2DerivativeTrick);
}

TEST_CASE("negative witness for beta near N (N=1)") {
    PositivityReport r = certify_positivity(1, 0.95);
    CHECK(r.verdict == Verdict::WitnessNegative);
    REQUIRE(r.witness.has_value());
    const auto [eta, value] = *r.witness;
    CHECK(value < 0.0);
    // re-evaluating F at the witness reproduces a negative value
    FResult f = F_detail(1, 0.95, eta, 1e-11);
    CHECK(f.value < -f.err);
}

TEST_CASE("negativity witness via the kernel identity") {
    for (int dim : {1, 2, 3}) {
        NegativityWitness w = negativity_witness(dim);
        CHECK(w.value < 0.0);
        CHECK(w.eta > 0.0);
    }
    // cross-module identity at random abscissae
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(0.5, 5.0);
    for (int i = 0; i < 10; ++i) {
        const double eta = u(rng);
        const double lhs = F_value(1, 1.0, eta, 1e-11, true) / eta;
        const double rhs = f_profile(1, eta, 1e-12);
        CHECK(std::fabs(lhs - rhs) <= 1e-6 * std::max(std::fabs(rhs), 1e-12));
    }
}

TEST_CASE("beta threshold scan brackets the sign change (N=1)") {
    BetaScanResult scan = scan_beta_threshold(1, 0.4, 0.97, 0.1, 300, 1e-8);
    CHECK(scan.largest_all_positive >= 7.0 / 16.0);
    CHECK(scan.smallest_negative < 1.0);
    CHECK(scan.smallest_negative > scan.largest_all_positive);
    CHECK(scan.rows.size() >= 6);
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        CHECK(scan.rows[i].beta > scan.rows[i - 1].beta);
}

TEST_CASE("envelope constants bound the solution at random samples") {
    SelfSimilarProfile p = SelfSimilarProfile::build(3, 1.0);
    PositivityReport rep = certify_positivity(3, 1.0);
    CHECK(rep.verdict != Verdict::WitnessNegative);
    EnvelopeConstants k = envelope_constants(p, rep);
    CHECK(k.K_star > 0.0);
    CHECK(k.K_star <= k.K_star_upper);
    EnvelopeCheck chk = verify_envelope_samples(p, k, 10000, 987654321u);
    CHECK(chk.lower_violations == 0);
    CHECK(chk.upper_violations == 0);
}

TEST_CASE("envelope constants require positivity") {
    SelfSimilarProfile p = SelfSimilarProfile::build(1, 0.95, 1e-3, 1e3, 400);
    PositivityReport rep = certify_positivity(1, 0.95);
    CHECK_THROWS_AS(envelope_constants(p, rep), PositivityRequired);
    CHECK(upper_envelope_constant(p) > 0.0);
}

TEST_CASE("theorem 1.1 certificate") {
    // psi from the |x|^{-beta} datum: psi(s) = c_{N,beta} s^{(N-1)/2 + beta - N}
    const int dim = 3;
    const double beta = 0.4;
    const double expo = 0.5 * (dim - 1) + beta - dim;
    TabulatedPsi psi;
    psi.s = logspace(1e-4, 1e4, 60);
    for (double s : psi.s) {
        psi.psi.push_back(c_coeff(dim, beta) * std::pow(s, expo));
        psi.dpsi.push_back(c_coeff(dim, beta) * expo * std::pow(s, expo - 1.0));
    }
    std::vector<std::pair<double, double>> xt = {{1.0, 1.0}, {0.3, 2.0}, {5.0, 0.1}};
    PositivityReport rep = certify_theorem11(dim, psi, xt);
    CHECK(rep.verdict == Verdict::CertifiedPositive);
    // the integral reproduces the linear solution for this datum
    for (const auto& [x, t] : xt) {
        CHECK(theorem11_value(dim, psi, x, t, 1e-10) ==
              doctest::Approx(linear_solution(dim, beta, x, t, 1e-10)).epsilon(1e-6));
    }
    // constant psi is admissible for N = 3 (the exponential factor is strict)
    TabulatedPsi flat;
    flat.s = {0.1, 1.0, 10.0};
    flat.psi = {2.0, 2.0, 2.0};
    flat.dpsi = {0.0, 0.0, 0.0};
    PositivityReport rep2 = certify_theorem11(dim, flat, {{1.0, 0.5}});
    CHECK(rep2.verdict == Verdict::CertifiedPositive);
    // increasing psi violates condition (c)
    TabulatedPsi bad;
    bad.s = {0.1, 1.0, 10.0};
    bad.psi = {1.0, 2.0, 3.0};
    bad.dpsi = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(certify_theorem11(dim, bad, {{1.0, 1.0}}), HypothesisViolation);
    CHECK_THROWS_AS(certify_theorem11(2, flat, {{1.0, 1.0}}), DomainError);
}

TEST_CASE("riesz smoothing") {
    SelfSimilarProfile p = SelfSimilarProfile::build(3, 1.0);
    // zero density
    RadialDensity zero;
    zero.q = 1.2;
    zero.r = {0.0, 1.0};
    zero.f = {0.0, 0.0};
    CHECK(riesz_smoothing(p, zero, 5.0, 0.5) == 0.0);
    // bump density: strictly positive smoothing
    RadialDensity bump;
    bump.q = 1.2;
    bump.r = linspace(0.0, 1.0, 21);
    for (double r : bump.r) bump.f.push_back(1.0 - r);
    CHECK(riesz_smoothing(p, bump, 5.0, 0.5) > 0.0);
    // narrow unit-mass bump approaches the plain linear solution
    RadialDensity narrow;
    narrow.q = 1.2;
    narrow.r = linspace(0.0, 0.01, 41);
    for (double r : narrow.r) narrow.f.push_back(1.0 - r / 0.01);
    // mass of the interpolated density
    auto fmass = [&](double r) { return narrow.value(r) * r * r; };
    const double mass = 4.0 * M_PI * oracle::adaptive_simpson(fmass, 0.0, 0.01, 1e-16);
    const double got = riesz_smoothing(p, narrow, 2.0, 0.3);
    const double expect = mass * linear_solution(3, 1.0, 2.0, 0.3);
    CHECK(got == doctest::Approx(expect).epsilon(1e-4));
    // invalid q and negative samples are rejected
    RadialDensity badq = bump;
    badq.q = 1.9;  // N/(N-beta) = 1.5 for (3,1)
    CHECK_THROWS_AS(riesz_smoothing(p, badq, 1.0, 1.0), DomainError);
    RadialDensity neg = bump;
    neg.f[3] = -0.1;
    CHECK_THROWS_AS(riesz_smoothing(p, neg, 1.0, 1.0), DomainError);
}
