#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckn/params.hpp"
#include "ckn/poisson.hpp"
#include "ckn/radial_profile.hpp"

namespace ckn {

enum class CaseTag { Part1_Supercritical, Part2_Bootstrap, Part3_CriticalShift, Inconclusive };
enum class Termination { DivergentMass, InadmissibleShift, BelowPSharp };

const char* to_string(CaseTag t);
const char* to_string(Termination t);

/// Subsolution w(r) = r^tau - r0^{tau-tau_+} r^{tau_+}: vanishes at r0,
/// positive inside, and L w = c(tau) r^{tau-2}. Requires tau strictly inside
/// (tau_-, tau_+), where c(tau) > 0.
struct BarrierInfo {
    RadialProfile w;
    double tau = 0.0;
    double r0 = 0.0;
    double c_tau = 0.0;
    double half_radius_floor = 0.0;  // inf over (0, r0/2] of w(r)/r^tau = 1 - 2^{tau-tau_+}
};

BarrierInfo barrier(const OperatorParams& p, double tau, double r0);

/// One exponent-improvement step tau_next = p*tau_j + theta + 2 with the
/// explicit barrier constant
///     d_next = q0 d_j^p / c(tau_next) * (1 - 2^{tau_next - tau_+}).
/// When tau_next leaves (tau_-, tau_+) the step is terminal and the caller
/// runs the divergent-mass test instead.
struct StepOutcome {
    bool terminal = false;
    double tau_next = 0.0;
    double d_next = 0.0;
};

StepOutcome lower_bound_step(const OperatorParams& p, double theta, double pexp, double q0,
                             double tau_j, double d_j, double r0 = 0.5);

/// Certificate of the nonexistence argument. For the critical-shift case the
/// tau/d sequences describe the bootstrap on the shifted parameters
/// (mu2 - sigma0) with potential constant q0/2; an inadmissible shift needs no
/// iteration at all.
struct LiouvilleTrace {
    double p = 0.0;
    double theta = 0.0;
    double q0 = 1.0;
    double d0 = 0.0;  // initial lower-bound constant 1 - 2^{tau_+} (unit boundary data)
    CaseTag case_tag = CaseTag::Inconclusive;
    std::vector<double> tau_sequence;
    std::vector<double> d_sequence;
    std::optional<double> sigma0;
    std::optional<double> shifted_mu2;
    Termination termination = Termination::BelowPSharp;
    double divergence_witness = 0.0;  // theta + p*tau_last + tau_+ - mu1 + N, <= 0 when divergent
    double p_sharp = 0.0;
    double q_sharp = 0.0;
    double q_sharp_measure = 0.0;
};

/// Dispatches the three-part nonexistence argument. Requires tau_+ < 0,
/// theta > -2, p > 0, q0 >= 0.
LiouvilleTrace bootstrap(const OperatorParams& p, double theta, double pexp, double q0);

struct LiouvilleVerdict {
    bool nonexistent = false;
    LiouvilleTrace trace;
};

/// Checks the nonexistence-theorem hypotheses (N >= 3, mu1 < N-2,
/// -(N-2-mu1)^2/4 <= mu2 < 0) and wraps bootstrap into a certificate.
LiouvilleVerdict liouville_verdict(const OperatorParams& p, double theta, double pexp, double q0);

/// Deterministic certificate JSON with a replay hash over its own content.
std::string certificate_json(const OperatorParams& p, const LiouvilleVerdict& v);

/// Solver-backed check of one bootstrap step: solves L u = q0 d_j^p r^{theta +
/// p tau_j} with k = 0 on B_R and measures the margin of u >= d_next r^{tau_next}
/// on (0, R/2]. A terminal step is witnessed by the gate refusing the source.
struct WitnessReport {
    bool terminal_divergence = false;
    bool dominated = false;
    double min_margin = 0.0;           // relative, over the whole sample grid
    double min_margin_interior = 0.0;  // relative, over samples r <= 0.45 R
    double tau_next = 0.0;
    double d_next = 0.0;
};

WitnessReport numeric_step_witness(const OperatorParams& p, double theta, double pexp, double q0,
                                   double tau_j, double d_j, double R,
                                   const QuadratureSpec& spec = {});

} // namespace ckn
