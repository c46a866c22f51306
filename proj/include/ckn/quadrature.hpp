#pragma once

#include <functional>

#include "ckn/params.hpp"
#include "ckn/radial_profile.hpp"
#include "ckn/test_function.hpp"

namespace ckn {

/// Controls for the singular-endpoint integrator: panels are geometrically
/// clustered toward 0 with the given ratio, each panel is resolved by an
/// adaptive Gauss rule, and the panel tail is closed by series extrapolation.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_levels = 60;
    double cluster_ratio = 0.5;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Integrates g over (0, R] where g may have power/log behavior at 0.
/// Non-convergence within max_levels returns converged = false with the best
/// available estimate, never a silent wrong answer.
QuadratureResult integrate_singular(const std::function<double(double)>& g, double R,
                                    const QuadratureSpec& spec = {});

/// Adaptive integration over [a, b] with no endpoint singularity.
QuadratureResult integrate_smooth(const std::function<double(double)>& g, double a, double b,
                                  const QuadratureSpec& spec = {});

/// Integrates g over [a, infinity), assuming eventual decay; diverging tails
/// come back with converged = false.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& g, double a,
                                       const QuadratureSpec& spec = {});

/// Numerical check of the weighted distributional identity
///     integral( Phi * L*(xi) dgamma ) = c * xi(0),  dgamma = |x|^{tau_+ - mu1} dx.
/// Radial xi reduces to a 1-D integral with weight exponent
/// tau_- + tau_+ - mu1 + N - 1 = 1, which is analytically nonsingular; the
/// implementation integrates that reduced form. Non-radial xi uses
/// sphere-cross-radius product quadrature and requires integer N in {2, 3}.
struct IdentityResult {
    double lhs = 0.0;
    double expected = 0.0;
    double residual = 0.0;
    bool converged = false;
    long evaluations = 0;
};

IdentityResult identity_residual(const OperatorParams& p, const TestFunction& xi,
                                 const QuadratureSpec& spec = {});

/// Critical Caffarelli-Kohn-Nirenberg inequality check for radial u:
///     lhs = int |x|^{-2a} |grad u|^2 dx,
///     rhs = ((N-2-2a)/2)^2 int |x|^{-2(a+1)} u^2 dx,
/// ratio = lhs/rhs >= 1 up to quadrature tolerance. Requires a < (N-2)/2.
struct CknResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool converged = false;
};

CknResult ckn_inequality_check(double N, double a, const RadialProfile& u,
                               const QuadratureSpec& spec = {});

} // namespace ckn
