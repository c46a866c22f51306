#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ckn/params.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/radial_profile.hpp"

namespace ckn {

/// Right-hand side f of the radial Poisson problem, with a hint for its
/// leading power at the origin: f(r) ~ r^theta * h(r), h bounded.
struct SourceTerm {
    RadialProfile profile;
    double theta_hint = 0.0;
};

SourceTerm power_source(double theta, double amplitude = 1.0);
SourceTerm constant_source(double value);

/// Tabulated source: piecewise-linear between the (r, f) samples, extended
/// below the first radius by the power law f_first * (r/r_first)^theta_hint
/// and by zero beyond the last radius. Samples must have increasing radii.
SourceTerm tabulated_source(const std::vector<std::array<double, 2>>& samples,
                            double theta_hint);

/// Decision of the weighted L1 existence gate for
///     integral_0^R |f(r)| r^{tau_+ - mu1 + N - 1} dr.
/// The analytic test (integrable iff theta + tau_+ - mu1 + N > 0) and the
/// observed panel decay must agree; a confident numerical contradiction of
/// the hint raises a diagnostic error.
struct GateResult {
    bool integrable = false;
    double value = 0.0;              // weighted mass when integrable
    double analytic_exponent = 0.0;  // theta + tau_+ - mu1 + N
    double numeric_exponent = 0.0;   // NaN when the decay was not resolved
    bool numeric_decisive = false;
};

GateResult weighted_l1_gate(const OperatorParams& p, const SourceTerm& f, double R,
                            const QuadratureSpec& spec = {});

/// Solution of L u = f on the punctured ball with u(R) = 0 and prescribed
/// singular coefficient k:
///     u = k*Phi + particular + boundary_coeff*Gamma.
/// The particular part is the variation-of-parameters solution; when the
/// source decays enough at the origin it is normalized to carry no Gamma
/// component there, so that for f = r^theta it equals r^{theta+2}/c(theta+2).
struct GreenSolution {
    double k = 0.0;
    double boundary_coeff = 0.0;
    double R = 1.0;
    Regime regime = Regime::Subcritical;
    bool resonant = false;           // theta + 2 coincides with tau_+
    bool canonical_particular = true;
    GateResult gate;
    std::function<double(double)> u, du, d2u;
    RadialProfile particular;
    std::vector<std::array<double, 2>> grid;  // (r, u(r)) samples
};

/// Requires an Integrable gate and an admissible regime; the Critical regime
/// additionally requires R <= 1 (sign of the logarithmic basis function).
GreenSolution green_solve(const OperatorParams& p, const SourceTerm& f, double R, double k,
                          const QuadratureSpec& spec = {});

/// Full solution as a profile with analytic derivatives.
RadialProfile solution_profile(const GreenSolution& sol);

/// Recovers the singular coefficient from samples (r_i, u(r_i)) on a
/// geometric grid r_i -> 0 by Richardson-style extrapolation of
/// u(r) r^{-tau_-} (Critical regime: u(r) / (r^{tau_0} (-ln r))).
struct CoefficientFit {
    double k = 0.0;
    double observed_order = 0.0;
};

CoefficientFit singular_coefficient(const OperatorParams& p,
                                    const std::vector<std::array<double, 2>>& samples);

/// Geometric sample grid of a solution, suitable for singular_coefficient.
std::vector<std::array<double, 2>> sample_for_extrapolation(const GreenSolution& sol,
                                                            int count = 26);

/// Max over a log grid in [r_lo, r_hi] of |L u - f|.
double verify_solution(const OperatorParams& p, const GreenSolution& sol, const SourceTerm& f,
                       double r_lo, double r_hi);

/// Pointwise ordering of two solutions sampled on a common grid.
struct OrderingReport {
    bool ordered = true;
    double max_violation = 0.0;
    double at_r = 0.0;
};

OrderingReport comparison_check(const OperatorParams& p, const std::vector<double>& u1,
                                const std::vector<double>& u2, const std::vector<double>& grid,
                                double tol = 1e-10);

/// CSV export, columns r,u,residual (LF line endings, 17 significant digits).
std::string solution_csv(const OperatorParams& p, const GreenSolution& sol, const SourceTerm& f);

/// One-line JSON summary {boundary_coeff, gate, k, regime}.
std::string solution_summary_json(const GreenSolution& sol);

} // namespace ckn
