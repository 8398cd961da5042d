#pragma once

#include <functional>
#include <vector>

namespace biharm {

struct GaussLegendre {
    std::vector<double> node;    // on (-1, 1)
    std::vector<double> weight;
};

// Cached Gauss-Legendre rule of order n (thread-safe).
const GaussLegendre& gl_rule(int n);

template <typename F>
double gl_integrate(F&& f, double a, double b, int n) {
    const GaussLegendre& r = gl_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.node.size(); ++i)
        s += r.weight[i] * f(mid + half * r.node[i]);
    return s * half;
}

struct QuadResult {
    double value = 0.0;
    double err = 0.0;       // error estimate
    bool converged = true;
};

// One Gauss-Kronrod 7/15 panel; err is |K15 - G7| based.
QuadResult gk15(const std::function<double(double)>& f, double a, double b);

// Adaptive bisection of GK15 panels to relative tolerance rel_tol
// (with absolute floor abs_floor against zero integrals).
QuadResult adaptive_gk(const std::function<double(double)>& f, double a, double b,
                       double rel_tol, double abs_floor = 1e-300, int max_depth = 30);

// tanh-sinh quadrature on (a, b); tolerates integrable endpoint
// singularities. Level-doubling until the requested relative change.
QuadResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, int max_level = 12);

}  // namespace biharm
