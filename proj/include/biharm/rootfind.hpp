#pragma once

#include <cmath>
#include <functional>

#include "biharm/errors.hpp"

namespace biharm {

// Plain bisection on a sign-changing bracket down to |b-a| <= width.
template <typename F>
double bisect(F&& f, double a, double b, double width, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw ConvergenceError("bisect: endpoints have equal sign");
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        if (b - a <= width || m == a || m == b) return m;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Safeguarded root refinement: bisection down to bisect_width, then Newton
// steps constrained to the bracket with bisection fallback. The combined
// iteration budget caps at max_iter.
template <typename F, typename DF>
double bisect_newton(F&& f, DF&& df, double a, double b, double bisect_width,
                     double tol, int max_iter = 60) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw ConvergenceError("bisect_newton: endpoints have equal sign");
    int used = 0;
    while (b - a > bisect_width && used < max_iter) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        ++used;
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    while (used < max_iter) {
        ++used;
        const double d = df(x);
        double xn;
        if (d != 0.0) {
            xn = x - fx / d;
            if (!(xn > a && xn < b)) xn = 0.5 * (a + b);  // fall back to bisection
        } else {
            xn = 0.5 * (a + b);
        }
        const double fxn = f(xn);
        if ((fxn > 0.0) == (fa > 0.0)) {
            a = xn;
            fa = fxn;
        } else {
            b = xn;
        }
        const double step = std::fabs(xn - x);
        x = xn;
        fx = fxn;
        if (step <= tol * (1.0 + std::fabs(x)) || fx == 0.0) return x;
        if (b - a <= tol * (1.0 + std::fabs(x))) return 0.5 * (a + b);
    }
    throw ConvergenceError("bisect_newton: iteration budget exhausted");
}

}  // namespace biharm
