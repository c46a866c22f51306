#include "ckn/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ckn/errors.hpp"
#include "ckn/format.hpp"

namespace ckn {

const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::Part1_Supercritical: return "Part1_Supercritical";
        case CaseTag::Part2_Bootstrap: return "Part2_Bootstrap";
        case CaseTag::Part3_CriticalShift: return "Part3_CriticalShift";
        case CaseTag::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::DivergentMass: return "DivergentMass";
        case Termination::InadmissibleShift: return "InadmissibleShift";
        case Termination::BelowPSharp: return "BelowPSharp";
    }
    return "?";
}

BarrierInfo barrier(const OperatorParams& p, double tau, double r0) {
    if (!(r0 > 0.0)) throw std::invalid_argument("barrier: r0 must be positive");
    const ExponentData e = exponent_data(p);
    if (!(tau > e.tau_minus && tau < e.tau_plus))
        throw std::invalid_argument(
            "barrier: tau must lie strictly inside (tau_-, tau_+), where c(tau) > 0");

    BarrierInfo b;
    b.tau = tau;
    b.r0 = r0;
    b.c_tau = indicial(p, tau);
    b.half_radius_floor = 1.0 - std::pow(2.0, tau - e.tau_plus);

    const double A = std::pow(r0, tau - e.tau_plus);
    const double tp = e.tau_plus;
    b.w.eval = [=](double r) { return std::pow(r, tau) - A * std::pow(r, tp); };
    b.w.deriv1 = [=](double r) {
        return tau * std::pow(r, tau - 1.0) - A * tp * std::pow(r, tp - 1.0);
    };
    b.w.deriv2 = [=](double r) {
        return tau * (tau - 1.0) * std::pow(r, tau - 2.0) -
               A * tp * (tp - 1.0) * std::pow(r, tp - 2.0);
    };
    b.w.support_radius = r0;
    return b;
}

StepOutcome lower_bound_step(const OperatorParams& p, double theta, double pexp, double q0,
                             double tau_j, double d_j, double /*r0*/) {
    if (!(d_j > 0.0)) throw std::invalid_argument("lower_bound_step: d_j must be positive");
    if (!(q0 >= 0.0)) throw std::invalid_argument("lower_bound_step: q0 must be nonnegative");
    const ExponentData e = exponent_data(p);
    StepOutcome out;
    out.tau_next = pexp * tau_j + theta + 2.0;
    if (!(out.tau_next > e.tau_minus && out.tau_next < e.tau_plus)) {
        out.terminal = true;
        out.d_next = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    // barrier comparison at r0, restricted to r0/2; the restriction factor
    // 1 - 2^{tau - tau_+} does not depend on r0
    const double c = indicial(p, out.tau_next);
    out.d_next = q0 * std::pow(d_j, pexp) / c * (1.0 - std::pow(2.0, out.tau_next - e.tau_plus));
    return out;
}

namespace {

// Part-2 iteration: tau_{j+1} = p tau_j + theta + 2 from tau_0 = tau_+,
// stopping as soon as the candidate falls to tau_- or below (the dgamma-mass
// of the induced source then diverges at the origin).
void run_iteration(const OperatorParams& p, double theta, double pexp, double q0,
                   LiouvilleTrace& trace) {
    const ExponentData e = exponent_data(p);
    trace.tau_sequence = {e.tau_plus};
    trace.d_sequence = {trace.d0};
    for (int j = 0; j < 10000; ++j) {
        const StepOutcome step = lower_bound_step(p, theta, pexp, q0, trace.tau_sequence.back(),
                                                  std::max(trace.d_sequence.back(), 1e-300));
        if (step.terminal) {
            trace.termination = Termination::DivergentMass;
            trace.divergence_witness = step.tau_next - e.tau_minus;
            return;
        }
        trace.tau_sequence.push_back(step.tau_next);
        trace.d_sequence.push_back(q0 > 0.0 ? step.d_next : 0.0);
    }
    throw NumericalError("bootstrap: iteration failed to terminate");
}

} // namespace

LiouvilleTrace bootstrap(const OperatorParams& p, double theta, double pexp, double q0) {
    if (!(theta > -2.0)) throw std::invalid_argument("bootstrap: theta must exceed -2");
    if (!(pexp > 0.0)) throw std::invalid_argument("bootstrap: p must be positive");
    if (!(q0 >= 0.0)) throw std::invalid_argument("bootstrap: q0 must be nonnegative");
    const ExponentData e = exponent_data(p);
    if (!(e.tau_plus < 0.0))
        throw std::invalid_argument("bootstrap: exponent gate undefined (tau_+ >= 0)");

    const CriticalExponents ce = critical_exponents(p, theta);

    LiouvilleTrace trace;
    trace.p = pexp;
    trace.theta = theta;
    trace.q0 = q0;
    trace.d0 = 1.0 - std::pow(2.0, e.tau_plus);
    trace.p_sharp = ce.p_sharp;
    trace.q_sharp = ce.q_sharp;
    trace.q_sharp_measure = ce.q_sharp_measure;

    const double ptol = 1e-12 * std::max(1.0, ce.p_sharp);
    if (pexp < ce.p_sharp - ptol) {
        trace.case_tag = CaseTag::Inconclusive;
        trace.termination = Termination::BelowPSharp;
        return trace;
    }

    if (std::abs(pexp - ce.p_sharp) <= ptol) {
        // p == p#: critical shift takes precedence over the supercritical gate
        // (they can only collide in the Critical regime, where p# == q#)
        trace.case_tag = CaseTag::Part3_CriticalShift;
        const double sigma0 = 0.5 * q0 * std::pow(trace.d0, pexp - 1.0);
        trace.sigma0 = sigma0;
        trace.shifted_mu2 = p.mu2 - sigma0;

        const OperatorParams shifted = make_params(p.N, p.mu1, p.mu2 - sigma0);
        if (shifted.regime == Regime::Inadmissible || sigma0 == 0.0) {
            // shifted operator has no real exponents: immediate nonexistence
            trace.termination = Termination::InadmissibleShift;
            trace.divergence_witness = std::numeric_limits<double>::quiet_NaN();
            return trace;
        }

        // remaining potential is Q/2: recurse with halved constant, where p is
        // now strictly supercritical for the shifted exponents
        const CriticalExponents sce = critical_exponents(shifted, theta);
        const ExponentData se = exponent_data(shifted);
        trace.d0 = 1.0 - std::pow(2.0, se.tau_plus);
        if (pexp >= sce.q_sharp_measure) {
            trace.tau_sequence = {se.tau_plus};
            trace.d_sequence = {trace.d0};
            trace.termination = Termination::DivergentMass;
            trace.divergence_witness = theta + (pexp + 1.0) * se.tau_plus - p.mu1 + p.N;
        } else {
            run_iteration(shifted, theta, pexp, 0.5 * q0, trace);
        }
        return trace;
    }

    if (pexp >= ce.q_sharp_measure - ptol) {
        // already supercritical: the Gamma lower bound alone gives divergent mass
        trace.case_tag = CaseTag::Part1_Supercritical;
        trace.tau_sequence = {e.tau_plus};
        trace.d_sequence = {trace.d0};
        trace.termination = Termination::DivergentMass;
        trace.divergence_witness = theta + (pexp + 1.0) * e.tau_plus - p.mu1 + p.N;
        return trace;
    }

    trace.case_tag = CaseTag::Part2_Bootstrap;
    run_iteration(p, theta, pexp, q0, trace);
    return trace;
}

LiouvilleVerdict liouville_verdict(const OperatorParams& p, double theta, double pexp,
                                   double q0) {
    if (!(p.N >= 3.0)) throw HypothesisError("liouville_verdict: requires N >= 3");
    if (!(p.mu1 < p.N - 2.0)) throw HypothesisError("liouville_verdict: requires mu1 < N - 2");
    if (!(p.mu2 < 0.0)) throw HypothesisError("liouville_verdict: requires mu2 < 0");
    if (p.regime == Regime::Inadmissible)
        throw HypothesisError("liouville_verdict: requires mu2 >= -(N-2-mu1)^2/4");
    if (!(theta > -2.0)) throw HypothesisError("liouville_verdict: requires theta > -2");

    LiouvilleVerdict v;
    v.trace = bootstrap(p, theta, pexp, q0);
    v.nonexistent = v.trace.case_tag != CaseTag::Inconclusive;
    return v;
}

namespace {

std::string json_double(double x) {
    if (!std::isfinite(x)) return "null";
    return format_double17(x);
}

std::string json_array(const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += json_double(v[i]);
    }
    return s + "]";
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string certificate_json(const OperatorParams& p, const LiouvilleVerdict& v) {
    const LiouvilleTrace& t = v.trace;
    // keys in sorted order; the replay hash is computed over everything else
    std::string pre;
    pre += "\"case_tag\":\"" + std::string(to_string(t.case_tag)) + "\"";
    pre += ",\"d0\":" + json_double(t.d0);
    pre += ",\"d_sequence\":" + json_array(t.d_sequence);
    pre += ",\"divergence_witness\":" + json_double(t.divergence_witness);
    pre += ",\"nonexistent\":" + std::string(v.nonexistent ? "true" : "false");
    pre += ",\"p\":" + json_double(t.p);
    pre += ",\"p_sharp\":" + json_double(t.p_sharp);
    pre += ",\"params\":{\"N\":" + json_double(p.N) + ",\"mu1\":" + json_double(p.mu1) +
           ",\"mu2\":" + json_double(p.mu2) + "}";
    pre += ",\"q0\":" + json_double(t.q0);
    pre += ",\"q_sharp\":" + json_double(t.q_sharp);
    pre += ",\"q_sharp_measure\":" + json_double(t.q_sharp_measure);

    std::string post;
    post += "\"shifted_mu2\":" + (t.shifted_mu2 ? json_double(*t.shifted_mu2) : "null");
    post += ",\"sigma0\":" + (t.sigma0 ? json_double(*t.sigma0) : "null");
    post += ",\"tau_sequence\":" + json_array(t.tau_sequence);
    post += ",\"termination\":\"" + std::string(to_string(t.termination)) + "\"";
    post += ",\"theta\":" + json_double(t.theta);

    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(pre + post)));
    return "{" + pre + ",\"replay_hash\":\"" + hex + "\"," + post + "}";
}

WitnessReport numeric_step_witness(const OperatorParams& p, double theta, double pexp, double q0,
                                   double tau_j, double d_j, double R,
                                   const QuadratureSpec& spec) {
    const ExponentData e = exponent_data(p);
    WitnessReport rep;
    rep.tau_next = pexp * tau_j + theta + 2.0;

    const double theta_prime = theta + pexp * tau_j;
    const double amp = q0 * std::pow(d_j, pexp);
    const SourceTerm f = power_source(theta_prime, amp);

    if (rep.tau_next <= e.tau_minus) {
        // terminal step: the induced source must fail the weighted gate
        const GateResult gate = weighted_l1_gate(p, f, R, spec);
        rep.terminal_divergence = !gate.integrable && amp > 0.0;
        rep.dominated = false;
        return rep;
    }

    const StepOutcome step = lower_bound_step(p, theta, pexp, q0, tau_j, std::max(d_j, 1e-300));
    rep.d_next = q0 > 0.0 ? step.d_next : 0.0;

    const GreenSolution sol = green_solve(p, f, R, 0.0, spec);

    const int n = 40;
    double mmin = std::numeric_limits<double>::infinity();
    double mmin_int = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double r = 1e-3 * R * std::pow(0.5 / 1e-3, static_cast<double>(i) / (n - 1));
        const double bound = rep.d_next * std::pow(r, rep.tau_next);
        double margin;
        if (bound > 0.0) {
            margin = (sol.u(r) - bound) / bound;
        } else {
            margin = sol.u(r);  // degenerate potential: absolute margin
        }
        mmin = std::min(mmin, margin);
        if (r <= 0.45 * R) mmin_int = std::min(mmin_int, margin);
    }
    rep.min_margin = mmin;
    rep.min_margin_interior = mmin_int;
    rep.dominated = mmin >= -1e-8;
    return rep;
}

} // namespace ckn
