#pragma once

namespace biharm {

// Gamma function for real x (poles at non-positive integers throw).
// Lanczos approximation, relative error below 1e-13 on the positive axis.
double gamma_fn(double x);

// log |Gamma(x)| for x > 0.
double log_gamma(double x);

}  // namespace biharm
