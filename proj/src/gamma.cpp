#include "biharm/gamma.hpp"

#include <cmath>

#include "biharm/errors.hpp"

namespace biharm {
namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set).
constexpr double kG = 7.0;
constexpr double kCoef[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_pos(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double a = kCoef[0];
    for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
    const double t = z + kG + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (x >= 0.5) return lanczos_pos(x);
    if (x == std::floor(x)) throw DomainError("gamma_fn: pole at non-positive integer");
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return M_PI / (std::sin(M_PI * x) * lanczos_pos(1.0 - x));
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
    if (x >= 0.5) {
        const double z = x - 1.0;
        double a = kCoef[0];
        for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
        const double t = z + kG + 0.5;
        return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
    }
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
}

}  // namespace biharm
