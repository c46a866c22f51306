#include "ckn/params.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>

#include "ckn/errors.hpp"

namespace ckn {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "Subcritical";
        case Regime::Critical: return "Critical";
        case Regime::Inadmissible: return "Inadmissible";
    }
    return "?";
}

namespace {

double discriminant_of(double N, double mu1, double mu2) {
    const double s = 2.0 - N + mu1;
    return s * s + 4.0 * mu2;
}

Regime regime_of(double N, double mu1, double mu2) {
    const double s = 2.0 - N + mu1;
    const double d = discriminant_of(N, mu1, mu2);
    const double tol = 1e-12 * std::max(1.0, s * s);
    if (std::abs(d) <= tol) return Regime::Critical;
    return d > 0.0 ? Regime::Subcritical : Regime::Inadmissible;
}

} // namespace

OperatorParams make_params(double N, double mu1, double mu2) {
    if (!(N >= 2.0)) throw std::invalid_argument("OperatorParams: dimension N must be >= 2");
    OperatorParams p;
    p.N = N;
    p.mu1 = mu1;
    p.mu2 = mu2;
    p.discriminant = discriminant_of(N, mu1, mu2);
    p.regime = regime_of(N, mu1, mu2);
    return p;
}

OperatorParams make_params_forced(double N, double mu1, double mu2, Regime forced) {
    OperatorParams p = make_params(N, mu1, mu2);
    p.regime = forced;
    return p;
}

Regime classify_params(double N, double mu1, double mu2) {
    return make_params(N, mu1, mu2).regime;
}

double sphere_area(double N) {
    if (!(N >= 2.0)) throw std::invalid_argument("sphere_area: N must be >= 2");
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

ExponentData exponent_data(const OperatorParams& p) {
    if (p.regime == Regime::Inadmissible)
        throw std::invalid_argument("exponent_data: no real exponents (discriminant < 0)");

    const double s = 2.0 - p.N + p.mu1;
    ExponentData e;
    e.discriminant = p.discriminant;
    e.tau_zero = 0.5 * s;
    e.sphere_area = sphere_area(p.N);

    if (p.regime == Regime::Critical) {
        e.tau_minus = e.tau_plus = e.tau_zero;
        e.c_const = e.sphere_area;
        return e;
    }

    // Quadratic roots of -tau^2 + s*tau + mu2, evaluated cancellation-free:
    // compute the root on the same side as s from the formula and recover the
    // other from the product tau_- * tau_+ = -mu2.
    const double sq = std::sqrt(std::max(p.discriminant, 0.0));
    double tm, tp;
    if (p.mu2 == 0.0) {
        tm = std::min(0.0, s);
        tp = std::max(0.0, s);
    } else if (s >= 0.0) {
        tp = 0.5 * (s + sq);
        tm = -p.mu2 / tp;
    } else {
        tm = 0.5 * (s - sq);
        tp = -p.mu2 / tm;
    }
    e.tau_minus = tm;
    e.tau_plus = tp;
    e.c_const = sq * e.sphere_area;
    return e;
}

double indicial(const OperatorParams& p, double tau) {
    return -tau * (p.N - 2.0 - p.mu1 + tau) + p.mu2;
}

HardyReduction hardy_reduction(const OperatorParams& p) {
    HardyReduction h;
    h.mu_tilde = p.mu2 + 0.25 * p.mu1 * p.mu1 - 0.5 * p.mu1 * (p.N - 2.0);
    h.exponent_shift = -0.5 * p.mu1;
    return h;
}

CriticalExponents critical_exponents(const OperatorParams& p, double theta) {
    if (!(theta > -2.0))
        throw std::invalid_argument("critical_exponents: theta must exceed -2");
    const ExponentData e = exponent_data(p);
    if (!(e.tau_plus < 0.0))
        throw std::invalid_argument("critical_exponents: no Serrin-type exponent (tau_+ >= 0)");

    CriticalExponents c;
    c.p_sharp = 1.0 + (2.0 + theta) / (-e.tau_plus);
    c.q_sharp = (p.N + theta) / (-e.tau_plus) - 1.0;
    c.q_sharp_measure = (p.N - p.mu1 + theta) / (-e.tau_plus) - 1.0;
    return c;
}

} // namespace ckn
