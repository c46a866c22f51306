#include "ckn/radial_profile.hpp"

namespace ckn {

RadialProfile power_profile(double tau, double amplitude) {
    RadialProfile p;
    p.eval = [=](double r) { return amplitude * std::pow(r, tau); };
    p.deriv1 = [=](double r) { return amplitude * tau * std::pow(r, tau - 1.0); };
    p.deriv2 = [=](double r) { return amplitude * tau * (tau - 1.0) * std::pow(r, tau - 2.0); };
    return p;
}

RadialProfile power_log_profile(double tau, double amplitude) {
    RadialProfile p;
    p.eval = [=](double r) { return -amplitude * std::pow(r, tau) * std::log(r); };
    p.deriv1 = [=](double r) {
        return amplitude * std::pow(r, tau - 1.0) * (-tau * std::log(r) - 1.0);
    };
    p.deriv2 = [=](double r) {
        return amplitude * std::pow(r, tau - 2.0) * (-tau * (tau - 1.0) * std::log(r) - (2.0 * tau - 1.0));
    };
    return p;
}

RadialProfile bump_profile(double R) {
    RadialProfile p;
    p.support_radius = R;
    p.eval = [=](double r) {
        const double u = (r / R) * (r / R);
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        return w * w * w;
    };
    p.deriv1 = [=](double r) {
        const double u = (r / R) * (r / R);
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        return -6.0 * (r / (R * R)) * w * w;
    };
    p.deriv2 = [=](double r) {
        const double u = (r / R) * (r / R);
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        return (-6.0 * w * w + 24.0 * u * w) / (R * R);
    };
    return p;
}

RadialProfile constant_profile(double value) {
    RadialProfile p;
    p.eval = [=](double) { return value; };
    p.deriv1 = [](double) { return 0.0; };
    p.deriv2 = [](double) { return 0.0; };
    return p;
}

} // namespace ckn
