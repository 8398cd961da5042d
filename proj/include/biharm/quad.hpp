#pragma once

#include <functional>
#include <vector>

#include "biharm/bessel.hpp"

namespace biharm {

enum class Monotonicity { StrictlyDecreasing, NonIncreasing, Unknown };

// Non-negative weight W(s) for integrals int_0^inf W(s) s^{1/2} J_mu(s) ds.
// small_s_exponent is a growth bound W(s) = O(s^eps) as s -> 0; the
// integrand is integrable near 0 when eps > -3/2 - mu.
struct WeightSpec {
    std::function<double(double)> w;
    Monotonicity monotone = Monotonicity::Unknown;
    double small_s_exponent = 0.0;
};

struct Lobe {
    int k = 0;                    // lobe index, interval [j_{mu,k}, j_{mu,k+1}]
    double a = 0.0, b = 0.0;
    double signed_integral = 0.0;
    double abs_integral = 0.0;    // M_{mu,k}; equals |signed| for W >= 0
    double err = 0.0;
    double weight_drop = 0.0;     // W(a+) - W(b-), for strictness checks
};

struct LobeDecomposition {
    double mu = 0.0;
    std::vector<Lobe> lobes;
    // Bound on the omitted alternating remainder: the last computed
    // absolute lobe integral (valid once M_k decreases).
    double tail_bound = 0.0;
    double quadrature_err = 0.0;  // accumulated per-lobe estimates
    bool monotone_warning = false;  // declared monotone but observed increasing
};

// Lobe-wise integrals of W(s) s^{1/2} J_mu(s) over consecutive zero
// intervals of J_mu. Appends lobes until k_max is reached or the current
// absolute lobe integral drops below tol times the running absolute sum.
// The first lobe [0, j_1] is integrated on a geometric mesh clustering
// at 0. Throws NonIntegrableWeightError when that mesh fails to converge.
LobeDecomposition decompose_lobes(Order order, const WeightSpec& weight, int k_max,
                                  double tol);

struct AlternatingSum {
    double value = 0.0;
    double error_bound = 0.0;
    bool certified_positive = false;  // M_k strictly decreasing observed
};

// Signed sum of the lobes in increasing k. With M_k strictly decreasing
// the total is positive and the omitted remainder is below tail_bound.
AlternatingSum alternating_sum(const LobeDecomposition& d);

// s_max with exp(-(s/eta)^4) < tol for s > s_max.
double truncation_point(double eta, double tol);

// log of M_{mu,k} = log int_{j_k}^{j_{k+1}} W(s) s^{1/2} |J_mu(s)| ds for a
// weight supplied as log W. Works far below the double underflow threshold
// by factoring each panel against its maximum, which is what the strict
// monotonicity checks of steep weights need.
double lobe_log_mass(Order order, const std::function<double(double)>& log_w, int k);

}  // namespace biharm
