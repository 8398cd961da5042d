#include "biharm/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "biharm/gamma.hpp"
#include "biharm/quad.hpp"
#include "biharm/rootfind.hpp"

namespace biharm {

double alpha_n(int dim) {
    if (dim < 1) throw DomainError("alpha_n: dimension must be positive");
    return std::pow(2.0 * M_PI, -0.5 * dim);
}

double f_profile(int dim, double eta, double tol) {
    if (dim < 1) throw DomainError("f_profile: dimension must be positive");
    if (!(eta > 0.0)) throw DomainError("f_profile: requires eta > 0");
    const Order order(0.5 * (dim - 2));
    const double inv_eta4 = 1.0 / (eta * eta * eta * eta);
    WeightSpec w;
    w.w = [=](double s) {
        const double s2 = s * s;
        return std::exp(-s2 * s2 * inv_eta4) * std::pow(s, 0.5 * (dim - 1));
    };
    w.small_s_exponent = 0.5 * (dim - 1);
    const double s_max = truncation_point(eta, 1e-18) + 2.0 * M_PI;
    const int k_max = static_cast<int>(s_max / 3.0) + 3;
    LobeDecomposition d = decompose_lobes(order, w, k_max, std::max(1e-14, 1e-3 * tol));
    AlternatingSum s = alternating_sum(d);
    const double scale = std::pow(eta, -dim);
    if ((s.error_bound) * scale > tol)
        throw AccuracyError("f_profile: tail bound exceeds requested tolerance");
    return scale * s.value;
}

double f_profile_limit0(int dim) {
    if (dim < 1) throw DomainError("f_profile_limit0: dimension must be positive");
    return std::pow(2.0, -0.5 * (dim - 2)) * gamma_fn(0.25 * dim) /
           (4.0 * gamma_fn(0.5 * dim));
}

double kernel_value(int dim, double x_norm, double t, double tol) {
    if (!(t > 0.0)) throw DomainError("kernel_value: requires t > 0");
    if (x_norm < 0.0) throw DomainError("kernel_value: requires |x| >= 0");
    const double pref = alpha_n(dim) * std::pow(t, -0.25 * dim);
    if (x_norm == 0.0) return pref * f_profile_limit0(dim);
    return pref * f_profile(dim, x_norm * std::pow(t, -0.25), tol);
}

double derivative_identity_residual(int dim, const std::vector<double>& etas,
                                    double tol) {
    const double h = 1e-4;
    // difference quotient amplifies quadrature noise by 1/(2h)
    const double ftol = std::min(tol, 1e-11);
    double worst = 0.0;
    for (double eta : etas) {
        if (!(eta > h)) throw DomainError("derivative_identity_residual: eta too small");
        const double d =
            (f_profile(dim, eta + h, ftol) - f_profile(dim, eta - h, ftol)) / (2.0 * h);
        worst = std::max(worst, std::fabs(d + eta * f_profile(dim + 2, eta, ftol)));
    }
    return worst;
}

std::vector<double> sign_changes(int dim, double eta_max, double tol) {
    if (!(eta_max > 0.0)) throw DomainError("sign_changes: eta_max must be positive");
    std::vector<double> zs;
    const double step = 0.05;
    double prev_eta = 0.5 * step;
    if (prev_eta >= eta_max) return zs;
    double prev = f_profile(dim, prev_eta, tol);
    for (double eta = prev_eta + step; eta < eta_max; eta += step) {
        const double cur = f_profile(dim, eta, tol);
        if ((cur > 0.0) != (prev > 0.0)) {
            const double z = bisect(
                [&](double e) { return f_profile(dim, e, tol); }, prev_eta, eta, 1e-8);
            zs.push_back(z);
        }
        prev = cur;
        prev_eta = eta;
    }
    return zs;
}

DecayFit fit_decay(int dim, double tol) {
    // envelope through the local |f| maxima of the oscillation
    std::vector<double> etas, absf;
    for (double eta = 5.0; eta <= 15.0 + 1e-9; eta += 0.05) {
        etas.push_back(eta);
        absf.push_back(std::fabs(f_profile(dim, eta, tol)));
    }
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < absf.size(); ++i)
        if (absf[i] >= absf[i - 1] && absf[i] >= absf[i + 1] && absf[i] > 0.0)
            peaks.push_back(i);
    if (peaks.size() < 2) throw ConvergenceError("fit_decay: not enough envelope peaks");
    // least squares of log|f| against eta^{4/3} over the peaks
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : peaks) {
        const double x = std::pow(etas[i], 4.0 / 3.0);
        const double y = std::log(absf[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(peaks.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    DecayFit fit;
    fit.c2 = -slope;
    if (!(fit.c2 > 0.0)) throw ConvergenceError("fit_decay: non-positive decay rate");
    // lift c1 until the bound covers every sample in the window
    double logc1 = -1e300;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (absf[i] <= 0.0) continue;
        logc1 = std::max(logc1, std::log(absf[i]) + fit.c2 * std::pow(etas[i], 4.0 / 3.0));
    }
    fit.c1 = std::exp(logc1);
    return fit;
}

KernelProfile KernelProfile::build(int dim, double eta_max, double tol) {
    if (!(eta_max > 4.0)) throw DomainError("KernelProfile: eta_max must exceed 4");
    KernelProfile p;
    p.dim = dim;
    p.eta = merge_grids({logspace(0.002, 0.02, 12), linspace(0.02, 4.0, 200),
                         logspace(4.0, eta_max, 160)});
    p.f.resize(p.eta.size());
    p.err.assign(p.eta.size(), tol);
    parallel_for(p.eta.size(), [&](std::size_t i) { p.f[i] = f_profile(dim, p.eta[i], tol); });
    p.limit0_ = f_profile_limit0(dim);
    std::vector<double> sx = p.eta, sy = p.f;
    sx.insert(sx.begin(), 0.0);
    sy.insert(sy.begin(), p.limit0_);
    p.spline_ = CubicSpline(std::move(sx), std::move(sy));
    p.decay = fit_decay(dim, tol);
    return p;
}

double KernelProfile::value(double eta_q) const {
    if (eta_q < 0.0) throw DomainError("KernelProfile::value: eta must be >= 0");
    if (eta_q >= eta.back()) return 0.0;  // super-exponential tail
    return spline_(eta_q);
}

double KernelProfile::kernel(double x_norm, double t) const {
    if (!(t > 0.0)) throw DomainError("KernelProfile::kernel: requires t > 0");
    return alpha_n(dim) * std::pow(t, -0.25 * dim) * value(x_norm * std::pow(t, -0.25));
}

}  // namespace biharm
