#include "biharm/grid.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace biharm {

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw DomainError("linspace: n must be positive");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = a + h * i;
    v.back() = b;
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("logspace: endpoints must be positive");
    std::vector<double> v = linspace(std::log(a), std::log(b), n);
    for (double& x : v) x = std::exp(x);
    if (n >= 1) {
        v.front() = a;
        v.back() = b;
    }
    return v;
}

std::vector<double> merge_grids(std::initializer_list<std::vector<double>> parts) {
    std::vector<double> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    out.reserve(all.size());
    for (double x : all) {
        if (out.empty() || x > out.back() * (1.0 + 1e-12) + 1e-300) out.push_back(x);
    }
    return out;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw DomainError("CubicSpline: need >= 2 matching points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("CubicSpline: abscissae must increase");
    m_.assign(n, 0.0);
    if (n == 2) return;
    // tridiagonal solve for natural boundary conditions
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        sub[i] = h0;
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * (x_[i] - x_[i - 1]);
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - (x_[i + 1] - x_[i]) * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

double CubicSpline::operator()(double t) const {
    const std::size_t n = x_.size();
    if (n == 0) throw DomainError("CubicSpline: empty");
    if (t <= x_.front()) t = x_.front();
    if (t >= x_.back()) t = x_.back();
    std::size_t lo = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
    if (lo == 0) lo = 1;
    if (lo >= n) lo = n - 1;
    const std::size_t i = lo - 1;
    const double h = x_[lo] - x_[i];
    const double a = (x_[lo] - t) / h, b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[lo] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[lo]) * h * h / 6.0;
}

namespace {
std::atomic<unsigned> g_threads{0};  // 0: pick from hardware
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
    unsigned n = g_threads.load();
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace biharm
