#pragma once

#include "biharm/grid.hpp"

namespace biharm {

// Bessel order mu >= -1/2. The dimension map mu = (N-2)/2 and its shifts
// only produce half-integer multiples, but any real order above -1/2 is
// accepted.
class Order {
public:
    explicit Order(double mu) : mu_(mu) {
        if (!(mu >= -0.5)) throw DomainError("Order: requires mu >= -1/2");
    }
    double mu() const { return mu_; }

private:
    double mu_;
};

// J_mu(eta) for eta > 0.
//
// Evaluation regimes: exact closed forms for mu = +-1/2; the ascending
// power series with compensated summation for eta <= 12; the Poisson
// integral representation (Gauss-Legendre in theta, tanh-sinh when 2*mu
// is not an integer) for 12 < eta < 50; the Hankel asymptotic expansion
// with at least four correction terms, truncated at the smallest term,
// for eta >= 50. Absolute error <= 1e-12 up to eta = 50 and relative
// error <= 1e-9 beyond, for the orders this library uses (mu <= 9/2).
double bessel_j(Order order, double eta);

// J_mu'(eta) via J_mu'(eta) = mu/eta J_mu(eta) - J_{mu+1}(eta).
double bessel_j_prime(Order order, double eta);

// k-th positive zero j_{mu,k} (k >= 1), absolute accuracy 1e-10.
// Seeded by the McMahon estimate (k + mu/2 - 1/4) pi, bracketed by a
// sign-change walk, refined by bisection plus safeguarded Newton.
double bessel_zero(Order order, int k);

// Max residual of J_mu(eta) - (mu+1)/eta J_{mu+1}(eta) - J_{mu+1}'(eta)
// over the grid abscissae; self-test hook.
double verify_recurrence(Order order, const RadialGrid& eta_grid);

namespace detail {
// Individual evaluation regimes, exposed so the switch points can be
// cross-validated at identical arguments.
double bessel_j_series(double mu, double eta);
double bessel_j_integral(double mu, double eta);
double bessel_j_asymptotic(double mu, double eta);
}  // namespace detail

}  // namespace biharm
