#pragma once

#include <functional>
#include <vector>

#include "ckn/params.hpp"
#include "ckn/radial_profile.hpp"
#include "ckn/test_function.hpp"

namespace ckn {

/// Fundamental solution Phi: r^{tau_-} (Subcritical), r^{tau_0}(-ln r)
/// (Critical, sign change at r = 1). Requires r > 0 and an admissible regime.
double phi(const OperatorParams& p, double r);

/// Second homogeneous solution Gamma = r^{tau_+} (r^{tau_0} in the Critical
/// regime); positive everywhere.
double gamma(const OperatorParams& p, double r);

RadialProfile phi_profile(const OperatorParams& p);
RadialProfile gamma_profile(const OperatorParams& p);

/// L r^tau = c(tau) r^{tau-2}.
struct PowerAction {
    double coefficient = 0.0;
    double exponent = 0.0;
};

PowerAction apply_power(const OperatorParams& p, double tau);

/// L (r^tau (-ln r)) = coeff_log r^{tau-2} (-ln r) + coeff_plain r^{tau-2},
/// with coeff_log = c(tau) and coeff_plain = 2*tau + N - 2 - mu1
/// (both vanish at tau_0 in the Critical regime).
struct PowerLogAction {
    double coeff_log = 0.0;
    double coeff_plain = 0.0;
    double exponent = 0.0;
};

PowerLogAction apply_power_log(const OperatorParams& p, double tau);

/// Applies the operator to a radial profile at r > 0:
///     -u'' - (N-1-mu1) u'/r + mu2 u/r^2.
/// Uses analytic derivatives when the profile carries them, otherwise
/// centered differences with relative step 1e-4*r floored at 1e-5.
double apply_radial(const OperatorParams& p, const RadialProfile& u, double r);

/// Finite-difference application with an explicit step (for convergence-order
/// studies); ignores any analytic derivatives on the profile.
double apply_radial_fd(const OperatorParams& p, const std::function<double(double)>& u,
                       double r, double h);

/// Adjoint-type operator of the weighted identity,
///     L* xi = -Delta xi + (-2 tau_+ + mu1) x.grad(xi)/|x|^2,
/// evaluated at x != 0.
double apply_adjoint(const OperatorParams& p, const TestFunction& xi, const Vec3& x);

/// Radial form: -xi'' - (N-1) xi'/r + (-2 tau_+ + mu1) xi'/r.
double apply_adjoint(const OperatorParams& p, const RadialProfile& xi, double r);

/// Empirical constant of the bound |L* xi| <= c (||xi||_C2 + ||xi||_C1 / |x|):
/// returns max over the sample radii of |L* xi(r)| / (||xi||_C2 + ||xi||_C1/r),
/// with the norms estimated on a dense grid over the support.
double adjoint_bound_check(const OperatorParams& p, const RadialProfile& xi,
                           const std::vector<double>& sample_radii);

} // namespace ckn
