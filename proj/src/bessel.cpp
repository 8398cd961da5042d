#include "biharm/bessel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "biharm/gamma.hpp"
#include "biharm/gauss.hpp"
#include "biharm/rootfind.hpp"

namespace biharm {
namespace {

bool is_half(double mu, double v) { return std::fabs(mu - v) < 1e-14; }

}  // namespace

namespace detail {

double bessel_j_series(double mu, double eta) {
    // ascending series with Kahan summation; term recurrence avoids
    // large intermediates
    const double q = 0.5 * eta;
    double term = std::exp(mu * std::log(q) - log_gamma(mu + 1.0));
    double sum = term, comp = 0.0;
    const double q2 = q * q;
    for (int k = 1; k < 200; ++k) {
        term *= -q2 / (k * (k + mu));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300 && k > eta * 0.5) break;
    }
    return sum;
}

// Poisson integral: J_mu(eta) =
//   (eta/2)^mu / (sqrt(pi) Gamma(mu+1/2)) * int_0^pi cos(eta cos t) sin^{2mu} t dt
double bessel_j_integral(double mu, double eta) {
    const double pref =
        std::exp(mu * std::log(0.5 * eta) - log_gamma(mu + 0.5)) / std::sqrt(M_PI);
    const double m2 = 2.0 * mu;
    const double m_round = std::round(m2);
    double integral;
    if (std::fabs(m2 - m_round) < 1e-13 && m_round >= 0.0) {
        const int m = static_cast<int>(m_round);
        auto f = [&](double t) {
            const double st = std::sin(t);
            double p = 1.0;
            for (int j = 0; j < m; ++j) p *= st;
            return std::cos(eta * std::cos(t)) * p;
        };
        const int n = 64 + static_cast<int>(std::ceil(1.5 * eta));
        integral = gl_integrate(f, 0.0, M_PI, n);
    } else {
        // non-integer exponent: endpoint algebraic singularity, tanh-sinh
        auto f = [&](double t) {
            return std::cos(eta * std::cos(t)) * std::pow(std::sin(t), m2);
        };
        integral = tanh_sinh(f, 0.0, M_PI, 1e-15, 13).value;
    }
    return pref * integral;
}

double bessel_j_asymptotic(double mu, double eta) {
    const double omega = eta - 0.5 * mu * M_PI - 0.25 * M_PI;
    const double fourmu2 = 4.0 * mu * mu;
    double p = 1.0, q = 0.0;
    double t = 1.0;
    double prev = 1.0;
    for (int k = 1; k <= 20; ++k) {
        const double odd = 2.0 * k - 1.0;
        t *= (fourmu2 - odd * odd) / (8.0 * k * eta);
        if (std::fabs(t) > prev && k > 8) break;  // past optimal truncation
        prev = std::fabs(t);
        const int phase = k % 4;
        if (phase == 1) q += t;
        else if (phase == 2) p -= t;
        else if (phase == 3) q -= t;
        else p += t;
        if (std::fabs(t) < 1e-17) break;
    }
    return std::sqrt(2.0 / (M_PI * eta)) * (p * std::cos(omega) - q * std::sin(omega));
}

}  // namespace detail

namespace {

std::shared_mutex g_zero_mutex;
std::map<double, std::vector<double>> g_zero_cache;  // keyed by mu

}  // namespace

double bessel_j(Order order, double eta) {
    if (!(eta > 0.0)) throw DomainError("bessel_j: requires eta > 0");
    const double mu = order.mu();
    if (is_half(mu, -0.5)) return std::sqrt(2.0 / (M_PI * eta)) * std::cos(eta);
    if (is_half(mu, 0.5)) return std::sqrt(2.0 / (M_PI * eta)) * std::sin(eta);
    if (eta <= 12.0) return detail::bessel_j_series(mu, eta);
    if (eta < 50.0 || eta < 2.0 * mu * mu + 20.0) return detail::bessel_j_integral(mu, eta);
    return detail::bessel_j_asymptotic(mu, eta);
}

double bessel_j_prime(Order order, double eta) {
    if (!(eta > 0.0)) throw DomainError("bessel_j_prime: requires eta > 0");
    const double mu = order.mu();
    return mu / eta * bessel_j(order, eta) - bessel_j(Order(mu + 1.0), eta);
}

double bessel_zero(Order order, int k) {
    if (k < 1) throw DomainError("bessel_zero: requires k >= 1");
    const double mu = order.mu();
    if (is_half(mu, 0.5)) return k * M_PI;
    if (is_half(mu, -0.5)) return (k - 0.5) * M_PI;
    {
        std::shared_lock lock(g_zero_mutex);
        auto it = g_zero_cache.find(mu);
        if (it != g_zero_cache.end() && static_cast<int>(it->second.size()) >= k)
            return it->second[k - 1];
    }
    std::unique_lock lock(g_zero_mutex);
    std::vector<double>& zeros = g_zero_cache[mu];
    auto f = [&](double x) { return bessel_j(Order(mu), x); };
    auto df = [&](double x) { return bessel_j_prime(Order(mu), x); };
    while (static_cast<int>(zeros.size()) < k) {
        const int kk = static_cast<int>(zeros.size()) + 1;
        const double prev = zeros.empty() ? 0.0 : zeros.back();
        const double mcmahon = (kk + 0.5 * mu - 0.25) * M_PI;
        double a = 0.0, b = 0.0;
        bool bracketed = false;
        if (kk >= 2 && mu <= 4.0) {
            // McMahon bracket; zero spacing exceeds 0.9 pi here, so a
            // sign change in it pins exactly one zero
            const double lo = std::max(prev + 1e-9, mcmahon - 0.45 * M_PI);
            const double hi = mcmahon + 0.45 * M_PI;
            if (lo < hi && (f(lo) > 0.0) != (f(hi) > 0.0)) {
                a = lo;
                b = hi;
                bracketed = true;
            }
        }
        if (!bracketed) {
            // sequential sign-change walk from the previous zero
            double x = zeros.empty() ? std::max(0.05, 0.5 * mu) : prev + 1e-9;
            const double step = zeros.empty() ? 0.25 : 0.25 * M_PI;
            double fx = f(x);
            int guard = 0;
            while (std::fabs(fx) < 1e-14 && guard++ < 50) {
                x += 1e-6;
                fx = f(x);
            }
            double y = x, fy = fx;
            guard = 0;
            while ((fy > 0.0) == (fx > 0.0)) {
                x = y;
                fx = fy;
                y += step;
                fy = f(y);
                if (++guard > 4000)
                    throw ConvergenceError("bessel_zero: bracket walk failed");
            }
            a = x;
            b = y;
        }
        const double z = bisect_newton(f, df, a, b, 1e-6, 1e-14, 60);
        if (!zeros.empty() && !(z > zeros.back()))
            throw ConvergenceError("bessel_zero: zeros failed to increase");
        zeros.push_back(z);
    }
    return zeros[k - 1];
}

double verify_recurrence(Order order, const RadialGrid& eta_grid) {
    eta_grid.validate();
    const double mu = order.mu();
    const Order up(mu + 1.0);
    double worst = 0.0;
    for (double eta : eta_grid.eta) {
        if (!(eta > 0.0)) throw DomainError("verify_recurrence: grid must be positive");
        const double lhs = bessel_j(order, eta);
        const double rhs = (mu + 1.0) / eta * bessel_j(up, eta) + bessel_j_prime(up, eta);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

}  // namespace biharm
