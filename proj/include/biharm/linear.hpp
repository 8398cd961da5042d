#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biharm/grid.hpp"

namespace biharm {

// c_{N,beta} = 2^{N/2-beta} Gamma((N-beta)/2) / Gamma(beta/2)
double c_coeff(int dim, double beta);

// Large-eta limit A_{N,beta} of F_{N,beta}, closed form
// 2^{beta-N/2} Gamma(beta/2) / Gamma((N-beta)/2); the reciprocal of c.
double a_limit(int dim, double beta);

// Small-eta limit of eta^{-beta} F_{N,beta}:
// Gamma(beta/4) / (4 Gamma(N/2) 2^{(N-2)/2}).
double a_tilde_limit(int dim, double beta);

struct FResult {
    double value = 0.0;
    double err = 0.0;
};

// F_{N,beta}(eta) = int_0^inf exp(-(s/eta)^4) s^{beta-N/2} J_{(N-2)/2}(s) ds
// by lobe decomposition, to absolute accuracy tol. beta >= dim requires
// allow_beta_ge_n (the negativity witness evaluates F_{N,N}).
FResult F_detail(int dim, double beta, double eta, double tol = 1e-9,
                 bool allow_beta_ge_n = false);
double F_value(int dim, double beta, double eta, double tol = 1e-9,
               bool allow_beta_ge_n = false);

// Extra term of the recurrence: 4 eta^{beta-N/2} int_0^inf e^{-s^4}
// s^{beta-N/2+3} J_{N/2}(eta s) ds; vanishes as eta -> infinity.
double F_recurrence_extra_term(int dim, double beta, double eta, double tol = 1e-9);

// |F_{N,beta} - (N-beta) F_{N+2,beta} - extra| with both sides computed
// independently.
double F_recurrence_residual(int dim, double beta, double eta, double tol = 1e-9);

// [S(t)phi](x) for phi = |x|^{-beta}, via c t^{-beta/4} G(eta) with
// G = eta^{-beta} F; x_norm = 0 uses the G(0+) = A-tilde limit.
double linear_solution(int dim, double beta, double x_norm, double t,
                       double tol = 1e-9);

// Tabulated F_{N,beta} with the two asymptotic constants. Interpolation
// runs through G = eta^{-beta} F against log eta (G is smooth down to 0);
// beyond the grid the Lemma-type limits take over.
struct SelfSimilarProfile {
    int dim = 0;
    double beta = 0.0;
    std::vector<double> eta;
    std::vector<double> F;
    std::vector<double> err;
    double A = 0.0;        // from quadrature at the largest grid abscissa
    double A_tilde = 0.0;  // closed form
    double c = 0.0;

    static SelfSimilarProfile build(int dim, double beta, double eta_min = 1e-3,
                                    double eta_max = 1e3, int points = 1200,
                                    double tol = 1e-9);

    double G(double eta_q) const;        // eta^{-beta} F, interpolated
    double F_at(double eta_q) const;     // eta^beta G
    double solution(double x_norm, double t) const;

private:
    CubicSpline g_spline_;  // G against log eta
};

enum class Verdict { CertifiedPositive, WitnessNegative, Inconclusive };
enum class Method { LobeMonotonicity, N2DerivativeTrick, N1MonotoneMap, GridScan };

struct PositivityReport {
    Verdict verdict = Verdict::Inconclusive;
    Method method = Method::GridScan;
    std::optional<std::pair<double, double>> witness;  // (eta, F < 0)
    double beta0 = 0.0;         // analytic threshold used for dispatch
    double scan_min = 0.0;      // grid-scan diagnostics
    double scan_min_eta = 0.0;
    std::string details;
};

// Positivity of F_{N,beta} per the dimension-specific routes: the
// monotone-lobe certificate for N >= 3 and beta <= (N+1)/2, the
// derivative trick through F_{4,beta+2} for N = 2, the monotone-map
// sine-lobe certificate for N = 1, and a reconfirmed grid scan otherwise.
PositivityReport certify_positivity(int dim, double beta);

// Tabulated psi(s) = s^{(N-1)/2} F[phi](s) with derivative samples;
// interpolated by power-law segments (exact on pure powers) and extended
// by the end segments. Finiteness of the weighted integrals (condition
// (a)) is the caller's obligation.
struct TabulatedPsi {
    std::vector<double> s, psi, dpsi;
    void validate() const;
    double value(double x) const;
    double left_exponent() const;  // power-law slope of the first segment
};

// Value of the solution integral |x|^{-(N+1)/2} int_0^inf psi(s/|x|)
// exp(-t s^4/|x|^4) s^{1/2} J_{(N-2)/2}(s) ds.
double theorem11_value(int dim, const TabulatedPsi& psi, double x_norm, double t,
                       double tol = 1e-9);

// Checks psi > 0 and psi' <= 0 on the samples (throws HypothesisViolation
// naming the failing condition and location), then certifies positivity of
// the solution integral at each (|x|, t) evaluation point lobe-wise.
PositivityReport certify_theorem11(int dim, const TabulatedPsi& psi,
                                   const std::vector<std::pair<double, double>>& xt);

struct BetaScanRow {
    double beta = 0.0;
    bool all_positive = false;
    double min_value = 0.0;
    double min_eta = 0.0;
};

struct BetaScanResult {
    std::vector<BetaScanRow> rows;        // raw per-beta verdicts
    double largest_all_positive = 0.0;    // 0 when none found
    double smallest_negative = 0.0;       // 0 when none found
};

// Steps beta from lo to hi at the given resolution using the grid-scan
// verdict, then tightens the bracket by bisection. Monotone consistency
// of the positivity set is not assumed; raw rows are preserved.
BetaScanResult scan_beta_threshold(int dim, double beta_lo, double beta_hi,
                                   double resolution, int eta_points = 800,
                                   double tol = 1e-8);

struct NegativityWitness {
    double eta = 0.0;
    double value = 0.0;  // F_{N,N}(eta) < 0
};

// Negative witness of F_{N,N} = eta^N f_N inside the first negative lobe
// of the kernel profile, cross-checked through both quadrature routes.
NegativityWitness negativity_witness(int dim);

struct EnvelopeConstants {
    double K_star = 0.0;        // lower envelope constant (Eq-1.9-type)
    double K_star_upper = 0.0;  // upper envelope constant (Eq-1.10-type)
    double K1 = 0.0, K2 = 0.0;  // weighted per-region minima (eta >= 1 / <= 1)
    double S1 = 0.0, S2 = 0.0;  // weighted per-region suprema
    double c = 0.0;
    double A = 0.0, A_tilde = 0.0;
};

// Sharp grid constants of the weighted functional (eta^beta + 1) G(eta):
// K_star = c (1 - 1e-9) min over the two-region decomposition including
// the Lemma-type limits, K_star_upper the matching supremum. Throws
// PositivityRequired when the profile is not positive.
EnvelopeConstants envelope_constants(const SelfSimilarProfile& profile,
                                     const PositivityReport& report);
EnvelopeConstants envelope_constants(int dim, double beta);

// Upper constant alone; valid for sign-changing profiles too.
double upper_envelope_constant(const SelfSimilarProfile& profile);

struct EnvelopeCheck {
    int samples = 0;
    int lower_violations = 0;
    int upper_violations = 0;
};

// Envelope inequalities at n random (x, t) log-uniform in
// [1e-2, 1e2]^2, evaluated through the profile.
EnvelopeCheck verify_envelope_samples(const SelfSimilarProfile& profile,
                                      const EnvelopeConstants& k, int n,
                                      unsigned seed);

// Non-negative radial density with exponent q, linearly interpolated and
// zero beyond the last radius.
struct RadialDensity {
    double q = 2.0;
    std::vector<double> r, f;
    void validate() const;
    double value(double radius) const;
};

// [S(t)psi](x) for psi = density * |.|^{-beta} (Riesz potential of the
// density): superposition of translated linear solutions, reduced to a
// radial-angular quadrature. Positive for non-trivial densities when beta
// is in the certified-positive range.
double riesz_smoothing(const SelfSimilarProfile& profile, const RadialDensity& density,
                       double x_norm, double t);

}  // namespace biharm
