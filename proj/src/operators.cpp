#include "ckn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ckn/errors.hpp"

namespace ckn {

double phi(const OperatorParams& p, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("phi: r must be positive");
    const ExponentData e = exponent_data(p);
    if (p.regime == Regime::Critical) return -std::pow(r, e.tau_zero) * std::log(r);
    return std::pow(r, e.tau_minus);
}

double gamma(const OperatorParams& p, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("gamma: r must be positive");
    const ExponentData e = exponent_data(p);
    return std::pow(r, e.tau_plus);
}

RadialProfile phi_profile(const OperatorParams& p) {
    const ExponentData e = exponent_data(p);
    if (p.regime == Regime::Critical) return power_log_profile(e.tau_zero);
    return power_profile(e.tau_minus);
}

RadialProfile gamma_profile(const OperatorParams& p) {
    return power_profile(exponent_data(p).tau_plus);
}

PowerAction apply_power(const OperatorParams& p, double tau) {
    return {indicial(p, tau), tau - 2.0};
}

PowerLogAction apply_power_log(const OperatorParams& p, double tau) {
    // The plain coefficient is the tau-derivative of c(tau) up to sign; it is
    // the unique choice vanishing together with c at the double root tau_0.
    return {indicial(p, tau), 2.0 * tau + p.N - 2.0 - p.mu1, tau - 2.0};
}

double apply_radial_fd(const OperatorParams& p, const std::function<double(double)>& u,
                       double r, double h) {
    if (!(r > 0.0)) throw std::invalid_argument("apply_radial_fd: r must be positive");
    if (!(h > 0.0) || h >= r) throw std::invalid_argument("apply_radial_fd: need 0 < h < r");
    const double um = u(r - h), u0 = u(r), up = u(r + h);
    const double d1 = (up - um) / (2.0 * h);
    const double d2 = (up - 2.0 * u0 + um) / (h * h);
    return -d2 - (p.N - 1.0 - p.mu1) * d1 / r + p.mu2 * u0 / (r * r);
}

double apply_radial(const OperatorParams& p, const RadialProfile& u, double r) {
    if (!(r > 0.0) || r > u.support_radius)
        throw std::invalid_argument("apply_radial: r outside evaluable range");
    if (u.has_derivatives()) {
        const double v = u.eval(r), d1 = u.deriv1(r), d2 = u.deriv2(r);
        return -d2 - (p.N - 1.0 - p.mu1) * d1 / r + p.mu2 * v / (r * r);
    }
    double h = std::max(1e-5, 1e-4 * r);
    if (h >= r) h = 0.5 * r;  // keep the stencil inside (0, .)
    return apply_radial_fd(p, u.eval, r, h);
}

double apply_adjoint(const OperatorParams& p, const TestFunction& xi, const Vec3& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (r2 == 0.0) throw std::invalid_argument("apply_adjoint: undefined at x = 0");
    const ExponentData e = exponent_data(p);
    const Vec3 g = xi.gradient(x);
    const double xdotg = x[0] * g[0] + x[1] * g[1] + x[2] * g[2];
    return -xi.hessian_trace(x) + (-2.0 * e.tau_plus + p.mu1) * xdotg / r2;
}

double apply_adjoint(const OperatorParams& p, const RadialProfile& xi, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("apply_adjoint: r must be positive");
    const ExponentData e = exponent_data(p);
    double d1, d2;
    if (xi.has_derivatives()) {
        d1 = xi.deriv1(r);
        d2 = xi.deriv2(r);
    } else {
        double h = std::max(1e-5, 1e-4 * r);
        if (h >= r) h = 0.5 * r;
        const double um = xi.eval(r - h), u0 = xi.eval(r), up = xi.eval(r + h);
        d1 = (up - um) / (2.0 * h);
        d2 = (up - 2.0 * u0 + um) / (h * h);
    }
    return -d2 - (p.N - 1.0) * d1 / r + (-2.0 * e.tau_plus + p.mu1) * d1 / r;
}

double adjoint_bound_check(const OperatorParams& p, const RadialProfile& xi,
                           const std::vector<double>& sample_radii) {
    const double R = std::isfinite(xi.support_radius) ? xi.support_radius : 1.0;
    double sup0 = 0.0, sup1 = 0.0, sup2 = 0.0;
    const int n = 2000;
    for (int i = 1; i <= n; ++i) {
        const double r = R * i / n;
        sup0 = std::max(sup0, std::abs(xi.eval(r)));
        if (xi.has_derivatives()) {
            sup1 = std::max(sup1, std::abs(xi.deriv1(r)));
            sup2 = std::max(sup2, std::abs(xi.deriv2(r)));
        }
    }
    const double c1 = sup0 + sup1;
    const double c2 = sup0 + sup1 + sup2;

    double worst = 0.0;
    for (double r : sample_radii) {
        if (!(r > 0.0)) continue;
        const double num = std::abs(apply_adjoint(p, xi, r));
        const double den = c2 + c1 / r;
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

} // namespace ckn
