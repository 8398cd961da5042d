#pragma once

#include <vector>

#include "biharm/grid.hpp"

namespace biharm {

// (2 pi)^{-N/2}
double alpha_n(int dim);

// Kernel profile f_N(eta) = eta^{-N} int_0^inf exp(-(s/eta)^4) s^{N/2}
// J_{(N-2)/2}(s) ds, evaluated by lobe decomposition to absolute
// accuracy tol.
double f_profile(int dim, double eta, double tol = 1e-10);

// Small-eta limit 2^{-(N-2)/2} Gamma(N/4) / (4 Gamma(N/2)) of f_N.
double f_profile_limit0(int dim);

// G(x,t) = alpha_N t^{-N/4} f_N(|x| t^{-1/4}); x_norm = 0 uses the limit.
double kernel_value(int dim, double x_norm, double t, double tol = 1e-10);

// max over the grid of |Df_N(eta) + eta f_{N+2}(eta)| with Df_N a central
// difference of step 1e-4.
double derivative_identity_residual(int dim, const std::vector<double>& etas,
                                    double tol = 1e-9);

// All zeros of f_N in (0, eta_max): 0.05-step scan, bisection to 1e-8.
std::vector<double> sign_changes(int dim, double eta_max, double tol = 1e-9);

struct DecayFit {
    double c1 = 0.0;
    double c2 = 0.0;  // |f_N(eta)| <= c1 exp(-c2 eta^{4/3}) on the fit window
};

// Tabulated f_N on a hybrid linear/log grid with cubic interpolation,
// for callers that evaluate the kernel many times.
struct KernelProfile {
    int dim = 0;
    std::vector<double> eta;
    std::vector<double> f;
    std::vector<double> err;
    DecayFit decay;

    static KernelProfile build(int dim, double eta_max = 30.0, double tol = 1e-10);

    double value(double eta_q) const;           // interpolated f_N
    double kernel(double x_norm, double t) const;  // G through the tabulation

private:
    CubicSpline spline_;
    double limit0_ = 0.0;
};

// Least-squares fit of the decay envelope on eta in [5, 15]; c1 is lifted
// so the bound holds at every sample of the fit window.
DecayFit fit_decay(int dim, double tol = 1e-10);

}  // namespace biharm
