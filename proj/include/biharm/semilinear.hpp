#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "biharm/grid.hpp"

namespace biharm {

// Super-Fujita semilinear problem with datum epsilon |x|^{-beta},
// beta = 4/(p-1).
struct ProblemSpec {
    int dim = 1;
    double p = 0.0;
    double epsilon = 0.0;
    double tol = 1e-8;
    int max_iters = 15;

    double beta() const { return 4.0 / (p - 1.0); }
    void validate() const {
        if (dim < 1) throw DomainError("ProblemSpec: dimension must be positive");
        if (!(p > 1.0 + 4.0 / dim))
            throw DomainError("ProblemSpec: requires the super-Fujita range p > 1 + 4/N");
        if (!(epsilon >= 0.0)) throw DomainError("ProblemSpec: epsilon must be >= 0");
        if (!(tol > 0.0)) throw DomainError("ProblemSpec: tol must be positive");
        if (max_iters < 1) throw DomainError("ProblemSpec: max_iters must be positive");
    }
};

// Radial self-similar field u(x,t) = t^{-beta/4} W(|x| t^{-1/4}) sampled on
// a shared eta grid; the contraction norm is sup (eta^beta + 1)|W|.
struct WeightedField {
    std::shared_ptr<const std::vector<double>> grid;
    std::vector<double> w;
    double beta = 0.0;

    double weighted_norm() const;
};

// Picard map Phi[v] = eps S(t)phi + int_0^t S(t-s) F_p(v(s)) ds reduced to
// the t = 1 profile by exact self-similarity. The Duhamel term runs through
// a discrete Hankel-transform pair (forward transform, multiplication by
// the diagonal symbol, inverse transform) with the time integral graded at
// both endpoints. The transform pair is validated on Gaussians at build
// time (round-trip error <= 1e-6).
class DuhamelOperator {
public:
    DuhamelOperator(int dim, double p);

    int dim() const { return dim_; }
    double p() const { return p_; }
    double beta() const { return beta_; }
    const std::shared_ptr<const std::vector<double>>& grid() const { return grid_; }

    // eps * (linear profile), i.e. Phi[0].
    WeightedField linear_field(double eps) const;

    // One Picard application. The nonlinearity can be switched off as a
    // test hook, which turns Phi into the constant map onto the linear
    // profile. Throws NormOverflow when the output norm exceeds ten times
    // max(input norm, linear norm).
    WeightedField apply(const WeightedField& v, double eps,
                        bool nonlinearity = true) const;

    // Weighted norm of the Duhamel term alone for the given field.
    double correction_norm(const WeightedField& v) const;

    // Grid upper envelope constant of the linear profile (the K^* this
    // operator's contraction ball is measured against).
    double K_upper() const { return k_upper_; }

    double roundtrip_error() const { return roundtrip_err_; }

private:
    std::vector<double> duhamel(const WeightedField& v) const;

    int dim_;
    double p_;
    double beta_;
    double gamma_;  // (N - beta)/4
    std::shared_ptr<const std::vector<double>> grid_;
    std::vector<double> lin_w_;  // c eta^{-beta} F on the grid
    double k_upper_ = 0.0;
    double roundtrip_err_ = 0.0;

    // transform machinery
    std::vector<double> r_nodes_, r_weights_;      // forward quadrature nodes
    std::vector<double> rho_storage_;              // transform output abscissae
    std::vector<double> rho_nodes_, rho_weights_;  // inverse quadrature nodes
    std::vector<double> fwd_;  // rho_storage x r_nodes
    std::vector<double> inv_;  // grid x rho_nodes
};

// Cached operator per (dim, p); construction is expensive.
const DuhamelOperator& duhamel_operator(int dim, double p);

// Phi[v] through the cached operator.
WeightedField duhamel_apply(const ProblemSpec& spec, const WeightedField& v,
                            bool nonlinearity = true);

struct PicardResult {
    WeightedField u;
    std::vector<double> diffs;      // successive weighted-norm differences
    double correction_norm = 0.0;   // weighted norm of the final Duhamel term
    double max_iterate_norm = 0.0;
    int iterations = 0;
};

// Iterates u_{k+1} = Phi[u_k] from the linear profile until the weighted
// difference drops below spec.tol. Throws ConvergenceError (reporting the
// observed ratio) when max_iters is exhausted.
PicardResult picard_solve(const ProblemSpec& spec);

struct SemilinearEnvelopes {
    std::optional<double> M_star;  // absent when some sample is <= 0
    double M_star_upper = 0.0;
};

// M^* = ||u||/eps and M_* = min (eta^beta+1) W / eps over the grid.
SemilinearEnvelopes verify_envelopes(const ProblemSpec& spec, const WeightedField& u);

struct HSample {
    double x = 0.0, t = 0.0, H = 0.0;
};

struct HReport {
    std::vector<HSample> samples;
    double weighted_sup = 0.0;  // max (|x|^beta + t^{beta/4}) H
    double c2_used = 0.0;
};

// H(x,t) = int_0^t int exp(-c2 (|y|/s^{1/4})^{4/3}) s^{-N/4} /
// (|x-y|^beta + (t-s)^{beta/4})^p dy ds, reduced to the scale-invariant
// profile in w = t^{-1/4} x and integrated with the singular time edge
// absorbed by a power substitution. c2 = 0 takes the kernel module's fit.
HReport H_bound_report(int dim, double p,
                       const std::vector<std::pair<double, double>>& xt,
                       double c2 = 0.0);

// t^{beta/4} H as a function of w alone (the scale-reduced profile).
double h_weighted_profile(int dim, double p, double c2, double w);

// u(x,t) = t^{-beta/4} W(|x| t^{-1/4}) through spline interpolation of the
// profile (clamped to the grid ends).
double reconstruct(const WeightedField& field, double x_norm, double t);

}  // namespace biharm
