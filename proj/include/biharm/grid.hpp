#pragma once

#include <cmath>
#include <functional>
#include <initializer_list>
#include <vector>

#include "biharm/errors.hpp"

namespace biharm {

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // a, b > 0

// Merge-sort-dedup of several abscissa sets.
std::vector<double> merge_grids(std::initializer_list<std::vector<double>> parts);

// Radial sample set: strictly increasing abscissae with optional values,
// carrying the (N, beta) context of the profile it samples.
struct RadialGrid {
    std::vector<double> eta;
    std::vector<double> value;
    int dim = 0;
    double beta = 0.0;

    void validate() const {
        if (eta.empty()) throw DomainError("RadialGrid: empty");
        for (std::size_t i = 1; i < eta.size(); ++i)
            if (!(eta[i] > eta[i - 1]))
                throw DomainError("RadialGrid: abscissae must strictly increase");
        if (!value.empty() && value.size() != eta.size())
            throw DomainError("RadialGrid: value/abscissa size mismatch");
    }
};

// Natural cubic spline.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double t) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives
};

// Deterministic index-parallel loop; results must be written per index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
void set_thread_count(unsigned n);
unsigned thread_count();

}  // namespace biharm
