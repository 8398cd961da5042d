#include "biharm/quad.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "biharm/gauss.hpp"

namespace biharm {
namespace {

constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

// Panel nodes with precomputed s^{1/2} J_mu(s); the Bessel factor is
// weight-independent, so lobes are shared across all integrals of the
// same order.
struct CachedPanel {
    double a, b;
    double s[15];
    double sj[15];  // s^{1/2} J_mu(s)
};

struct CachedLobe {
    CachedPanel half[2];
};

std::shared_mutex g_lobe_mutex;
std::map<std::pair<double, int>, CachedLobe> g_lobe_cache;

CachedPanel make_panel(Order order, double a, double b) {
    CachedPanel p;
    p.a = a;
    p.b = b;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < 7; ++i) {
        p.s[i] = mid - half * kXgk[i];
        p.s[14 - i] = mid + half * kXgk[i];
    }
    p.s[7] = mid;
    for (int i = 0; i < 15; ++i) p.sj[i] = std::sqrt(p.s[i]) * bessel_j(order, p.s[i]);
    return p;
}

const CachedLobe& cached_lobe(Order order, int k, double a, double b) {
    const std::pair<double, int> key{order.mu(), k};
    {
        std::shared_lock lock(g_lobe_mutex);
        auto it = g_lobe_cache.find(key);
        if (it != g_lobe_cache.end()) return it->second;
    }
    CachedLobe l;
    const double m = 0.5 * (a + b);
    l.half[0] = make_panel(order, a, m);
    l.half[1] = make_panel(order, m, b);
    std::unique_lock lock(g_lobe_mutex);
    return g_lobe_cache.emplace(key, l).first->second;
}

QuadResult panel_eval(const CachedPanel& p, const std::function<double(double)>& w) {
    const double half = 0.5 * (p.b - p.a);
    double fv[15];
    for (int i = 0; i < 15; ++i) fv[i] = w(p.s[i]) * p.sj[i];
    double kron = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    QuadResult r;
    r.value = kron * half;
    r.err = std::fabs(kron - gauss) * half;
    return r;
}

}  // namespace

LobeDecomposition decompose_lobes(Order order, const WeightSpec& weight, int k_max,
                                  double tol) {
    if (!(tol > 0.0)) throw DomainError("decompose_lobes: tol must be positive");
    if (k_max < 1) throw DomainError("decompose_lobes: k_max must be positive");
    const double mu = order.mu();
    LobeDecomposition out;
    out.mu = mu;

    auto integrand = [&](double s) {
        return weight.w(s) * std::sqrt(s) * bessel_j(order, s);
    };
    const double lobe_tol = std::max(1e-12, 1e-2 * tol);

    // declared-monotone spot check on a log grid across the working range
    if (weight.monotone != Monotonicity::Unknown) {
        const double j1 = bessel_zero(order, 1);
        double prev = weight.w(1e-4 * j1);
        double scale = std::fabs(prev);
        for (double s : logspace(1e-4 * j1, std::max(1.0, k_max * M_PI), 64)) {
            const double cur = weight.w(s);
            scale = std::max(scale, std::fabs(cur));
            if (cur > prev + 1e-12 * std::max(1.0, scale)) out.monotone_warning = true;
            prev = cur;
        }
    }

    double running_abs = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        const double a = (k == 0) ? 0.0 : bessel_zero(order, k);
        const double b = bessel_zero(order, k + 1);
        Lobe lobe;
        lobe.k = k;
        lobe.a = a;
        lobe.b = b;
        if (k == 0) {
            // geometric mesh clustering at 0 absorbs the s^eps behaviour
            const double q = mu + 0.5 + weight.small_s_exponent;
            if (q <= -1.0)
                throw NonIntegrableWeightError(
                    "decompose_lobes: weight exponent violates integrability");
            int m = static_cast<int>(std::ceil(53.2 / (q + 1.0)));
            m = std::min(std::max(m, 8), 600);
            double val = 0.0, err = 0.0;
            double hi = b;
            double last3 = 0.0, prev3 = 0.0;
            for (int p = 0; p < m; ++p) {
                const double lo = (p + 1 == m) ? 0.0 : hi * 0.5;
                QuadResult r = adaptive_gk(integrand, lo, hi, lobe_tol, 1e-300, 12);
                val += r.value;
                err += r.err;
                if (p >= m - 3) last3 += std::fabs(r.value);
                else if (p >= m - 6) prev3 += std::fabs(r.value);
                hi = lo;
            }
            const double mag = std::max(std::fabs(val), 1e-300);
            if (last3 > 0.75 * prev3 && last3 > 10.0 * tol * mag)
                throw NonIntegrableWeightError(
                    "decompose_lobes: first lobe mesh failed to converge");
            lobe.signed_integral = val;
            lobe.err = err;
        } else {
            const CachedLobe& cl = cached_lobe(order, k, a, b);
            QuadResult r0 = panel_eval(cl.half[0], weight.w);
            QuadResult r1 = panel_eval(cl.half[1], weight.w);
            double val = r0.value + r1.value;
            double err = r0.err + r1.err;
            const double need = lobe_tol * std::max(std::fabs(val), 1e-300);
            if (err > need) {
                // sharp weight variation inside the lobe: refine adaptively
                QuadResult r = adaptive_gk(integrand, a, b, lobe_tol, 1e-300, 16);
                val = r.value;
                err = r.err;
            }
            lobe.signed_integral = val;
            lobe.err = err;
        }
        lobe.abs_integral = std::fabs(lobe.signed_integral);
        lobe.weight_drop = weight.w(a + 1e-12 * (b - a)) - weight.w(b - 1e-12 * (b - a));
        out.lobes.push_back(lobe);
        out.quadrature_err += lobe.err;
        running_abs += lobe.abs_integral;
        out.tail_bound = lobe.abs_integral;
        if (k >= 1 && lobe.abs_integral < tol * running_abs + 1e-300) break;
    }
    return out;
}

AlternatingSum alternating_sum(const LobeDecomposition& d) {
    if (d.lobes.size() < 2)
        throw DomainError("alternating_sum: need at least two lobes");
    AlternatingSum r;
    double sum = 0.0, comp = 0.0;
    bool decreasing = true;
    for (std::size_t i = 0; i < d.lobes.size(); ++i) {
        const double y = d.lobes[i].signed_integral - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (i + 1 < d.lobes.size() &&
            !(d.lobes[i].abs_integral > d.lobes[i + 1].abs_integral))
            decreasing = false;
    }
    r.value = sum;
    r.error_bound = d.tail_bound + d.quadrature_err;
    r.certified_positive = decreasing;
    return r;
}

double truncation_point(double eta, double tol) {
    if (!(eta > 0.0)) throw DomainError("truncation_point: eta must be positive");
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("truncation_point: tol in (0,1)");
    return eta * std::pow(std::log(1.0 / tol), 0.25);
}

namespace {

// GK15 of exp(log_w) s^{1/2} |J| on [a,b] in log space: returns
// log(integral). -inf when every node underflows relative to m = 0.
double panel_log_mass(Order order, const std::function<double(double)>& log_w,
                      double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double t[15];
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 15; ++i) {
        const double s = (i < 7)    ? mid - half * kXgk[i]
                         : (i > 7)  ? mid + half * kXgk[14 - i]
                                    : mid;
        const double j = std::fabs(bessel_j(order, s));
        t[i] = log_w(s) + 0.5 * std::log(s) + (j > 0.0 ? std::log(j) : -1e306);
        m = std::max(m, t[i]);
    }
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double w = (i == 7) ? kWgk[7] : kWgk[i < 7 ? i : 14 - i];
        sum += w * std::exp(t[i] - m);
    }
    return m + std::log(sum * half);
}

}  // namespace

double lobe_log_mass(Order order, const std::function<double(double)>& log_w, int k) {
    if (k < 0) throw DomainError("lobe_log_mass: k must be >= 0");
    const double a = (k == 0) ? 0.0 : bessel_zero(order, k);
    const double b = bessel_zero(order, k + 1);
    // mass can concentrate against the left endpoint under steep decay;
    // panels approach it geometrically (and 0, for k = 0, to absorb s^eps)
    std::vector<double> logs;
    double hi = b;
    const int levels = (k == 0) ? 60 : 40;
    for (int i = 0; i < levels; ++i) {
        const double lo = (i + 1 == levels) ? a : a + (hi - a) * 0.5;
        logs.push_back(panel_log_mass(order, log_w, lo, hi));
        hi = lo;
        if (hi <= a) break;
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double l : logs) m = std::max(m, l);
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - m);
    return m + std::log(sum);
}

}  // namespace biharm
