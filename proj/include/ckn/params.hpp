#pragma once

#include <string>

namespace ckn {

/// Sign of the discriminant (2-N+mu1)^2 + 4*mu2 splits the parameter space.
/// Subcritical: two distinct real characteristic exponents. Critical: a double
/// root and a logarithmic second solution. Inadmissible: no real exponents.
enum class Regime { Subcritical, Critical, Inadmissible };

const char* to_string(Regime r);

/// Parameters of the operator  L u = -Delta u + mu1 x.grad(u)/|x|^2 + mu2 u/|x|^2
/// in dimension N. The discriminant and regime are computed once at
/// construction and cached; instances are immutable values.
struct OperatorParams {
    double N = 3.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double discriminant = 0.0;
    Regime regime = Regime::Subcritical;
};

/// Classifies and caches; throws std::invalid_argument for N < 2.
/// Criticality is detected with relative tolerance 1e-12 on the discriminant.
OperatorParams make_params(double N, double mu1, double mu2);

/// Same, but the caller pins the regime (for studies exactly on the
/// discriminant-zero boundary, where floating point cannot decide).
OperatorParams make_params_forced(double N, double mu1, double mu2, Regime forced);

Regime classify_params(double N, double mu1, double mu2);

/// Characteristic exponents of radial power solutions together with the
/// constant of the weighted distributional identity.
struct ExponentData {
    double tau_minus = 0.0;
    double tau_plus = 0.0;
    double tau_zero = 0.0;      // (2-N+mu1)/2, the double root in the Critical regime
    double discriminant = 0.0;
    double c_const = 0.0;       // sqrt(D)*|S^{N-1}| (Subcritical), |S^{N-1}| (Critical)
    double sphere_area = 0.0;
};

/// Throws std::invalid_argument in the Inadmissible regime ("no real exponents").
ExponentData exponent_data(const OperatorParams& p);

/// Indicial polynomial c(tau) = -tau*(N-2-mu1+tau) + mu2. Zero exactly at
/// tau_-, tau_+; positive strictly between them; concave in tau.
double indicial(const OperatorParams& p, double tau);

/// Substitution u = r^{mu1/2} v turns the operator into a pure Hardy-Leray
/// operator with parameter mu_tilde; exponents shift by -mu1/2.
struct HardyReduction {
    double mu_tilde = 0.0;
    double exponent_shift = 0.0;
};

HardyReduction hardy_reduction(const OperatorParams& p);

/// Critical exponents of the Lane-Emden nonexistence theory. Defined only for
/// tau_+ < 0 (requires mu2 < 0 and mu1 < N-2) and theta > -2.
///
/// q_sharp is the form printed in the source theory; q_sharp_measure carries
/// the mu1 correction so that p >= q_sharp_measure is exactly the divergence
/// of the weighted mass of Q*Gamma^p at the origin. They coincide for mu1 = 0,
/// and p_sharp == q_sharp_measure exactly in the Critical regime.
struct CriticalExponents {
    double p_sharp = 0.0;
    double q_sharp = 0.0;
    double q_sharp_measure = 0.0;
};

CriticalExponents critical_exponents(const OperatorParams& p, double theta);

/// |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2); analytic in N, requires N >= 2.
double sphere_area(double N);

} // namespace ckn
