#pragma once

#include <cmath>
#include <functional>
#include <limits>

namespace ckn {

enum class Smoothness { C0, C1, C2 };

/// A radial function on (0, support_radius]. First/second derivatives are
/// optional; consumers fall back to centered finite differences when absent.
/// Profiles are immutable and must be evaluable concurrently.
struct RadialProfile {
    std::function<double(double)> eval;
    std::function<double(double)> deriv1;   // may be empty
    std::function<double(double)> deriv2;   // may be empty
    double support_radius = std::numeric_limits<double>::infinity();
    Smoothness smoothness = Smoothness::C2;

    bool has_derivatives() const { return static_cast<bool>(deriv1) && static_cast<bool>(deriv2); }
};

/// r^tau with analytic derivatives.
RadialProfile power_profile(double tau, double amplitude = 1.0);

/// r^tau * (-ln r) with analytic derivatives.
RadialProfile power_log_profile(double tau, double amplitude = 1.0);

/// (1 - (r/R)^2)^3 inside B_R, 0 outside: a C^2 compactly supported bump with
/// bump(0) = 1 and bump'(0+) = 0.
RadialProfile bump_profile(double R = 1.0);

/// Constant function.
RadialProfile constant_profile(double value);

} // namespace ckn
