#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckn/errors.hpp"
#include "ckn/liouville.hpp"
#include "ckn/operators.hpp"
#include "ckn/params.hpp"

using namespace ckn;

namespace {

// Replays a certificate using only exponent arithmetic: recomputes the tau/d
// sequences and the divergence witness from the recorded inputs.
bool replay(const OperatorParams& p, const LiouvilleTrace& t) {
    OperatorParams eff = p;
    double q0 = t.q0;
    if (t.case_tag == CaseTag::Inconclusive) return t.termination == Termination::BelowPSharp;
    if (t.case_tag == CaseTag::Part3_CriticalShift) {
        if (!t.sigma0 || !t.shifted_mu2) return false;
        eff = make_params(p.N, p.mu1, *t.shifted_mu2);
        if (eff.regime == Regime::Inadmissible)
            return t.termination == Termination::InadmissibleShift;
        q0 = 0.5 * q0;
    }
    const ExponentData e = exponent_data(eff);
    if (t.tau_sequence.empty() || t.tau_sequence.front() != e.tau_plus) return false;
    for (size_t j = 0; j + 1 < t.tau_sequence.size(); ++j) {
        const double cand = t.p * t.tau_sequence[j] + t.theta + 2.0;
        if (std::abs(cand - t.tau_sequence[j + 1]) > 1e-12 * (1.0 + std::abs(cand))) return false;
        const double expect_d = q0 * std::pow(t.d_sequence[j], t.p) / indicial(eff, cand) *
                                (1.0 - std::pow(2.0, cand - e.tau_plus));
        if (std::abs(expect_d - t.d_sequence[j + 1]) > 1e-10 * (1.0 + std::abs(expect_d)))
            return false;
    }
    const double last = t.tau_sequence.back();
    const double witness = t.theta + t.p * last + e.tau_plus - p.mu1 + p.N;
    return t.termination == Termination::DivergentMass && witness <= 1e-12;
}

} // namespace

TEST_CASE("barrier construction") {
    const OperatorParams p = make_params(3, 0, 0);
    const BarrierInfo b = barrier(p, -0.5, 1.0);
    CHECK(b.c_tau == doctest::Approx(0.25));
    CHECK(b.w.eval(1.0) == doctest::Approx(0.0));
    CHECK(b.w.eval(0.25) == doctest::Approx(std::pow(0.25, -0.5) - 1.0));
    // residual against the closed-form action
    for (double r : {0.2, 0.5, 0.9}) {
        const double expect = b.c_tau * std::pow(r, -2.5);
        CHECK(apply_radial(p, b.w, r) == doctest::Approx(expect).epsilon(1e-9));
    }
    // floor of w/r^tau on (0, r0/2]
    CHECK(b.half_radius_floor == doctest::Approx(1.0 - std::pow(2.0, -0.5)).epsilon(1e-14));
    double inf_ratio = 1e300;
    for (int i = 1; i <= 400; ++i) {
        const double r = 0.5 * i / 400.0;
        inf_ratio = std::min(inf_ratio, b.w.eval(r) / std::pow(r, -0.5));
    }
    CHECK(inf_ratio == doctest::Approx(b.half_radius_floor).epsilon(1e-6));
    CHECK(b.w.eval(0.3) > 0.0);

    CHECK_THROWS_AS(barrier(p, -1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(barrier(p, 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("lower bound step") {
    const OperatorParams p = make_params(3, 0, -0.2);
    const ExponentData e = exponent_data(p);
    const double theta = 0.0, pexp = 9.0;

    const StepOutcome s1 = lower_bound_step(p, theta, pexp, 1.0, e.tau_plus, 1.0);
    CHECK_FALSE(s1.terminal);
    CHECK(s1.tau_next == doctest::Approx(-0.48753882025018887).epsilon(1e-10));
    CHECK(s1.d_next > 0.0);

    // doubling d_j scales d_next by 2^p
    const StepOutcome s2 = lower_bound_step(p, theta, pexp, 1.0, e.tau_plus, 2.0);
    CHECK(s2.d_next == doctest::Approx(std::pow(2.0, pexp) * s1.d_next).epsilon(1e-12));

    // q0 = 0 degenerates the bound
    CHECK(lower_bound_step(p, theta, pexp, 0.0, e.tau_plus, 1.0).d_next == doctest::Approx(0.0));

    // exiting the interval signals the termination test
    CHECK(lower_bound_step(p, theta, pexp, 1.0, s1.tau_next, 1.0).terminal);
}

TEST_CASE("bootstrap dispatch on the reference parameters") {
    const OperatorParams p = make_params(3, 0, -0.2);
    {
        const LiouvilleTrace t = bootstrap(p, 0.0, 9.0, 1.0);
        CHECK(t.case_tag == CaseTag::Part2_Bootstrap);
        REQUIRE(t.tau_sequence.size() == 2);
        CHECK(t.tau_sequence[0] == doctest::Approx(-0.27639320225002106).epsilon(1e-10));
        CHECK(t.tau_sequence[1] == doctest::Approx(-0.48753882025018887).epsilon(1e-10));
        CHECK(t.termination == Termination::DivergentMass);
        // stop because 9*tau_1 + 2 <= tau_-
        CHECK(9.0 * t.tau_sequence[1] + 2.0 <= exponent_data(p).tau_minus);
        CHECK(replay(p, t));
    }
    {
        const LiouvilleTrace t = bootstrap(p, 0.0, 10.0, 1.0);
        CHECK(t.case_tag == CaseTag::Part1_Supercritical);
        CHECK(t.tau_sequence.size() == 1);
        CHECK(t.termination == Termination::DivergentMass);
        CHECK(t.divergence_witness <= 0.0);
        CHECK(replay(p, t));
    }
    {
        const LiouvilleTrace t = bootstrap(p, 0.0, 5.0, 1.0);
        CHECK(t.case_tag == CaseTag::Inconclusive);
        CHECK(t.termination == Termination::BelowPSharp);
    }
    CHECK_THROWS_WITH_AS(bootstrap(make_params(3, 0, 0.2), 0.0, 5.0, 1.0),
                         doctest::Contains("exponent gate undefined"), std::invalid_argument);
}

TEST_CASE("critical boundary p == p#: the shift leaves the admissible range") {
    const OperatorParams p = make_params(3, 0, -0.25);
    REQUIRE(p.regime == Regime::Critical);
    const LiouvilleTrace t = bootstrap(p, 0.0, 5.0, 1.0);
    CHECK(t.case_tag == CaseTag::Part3_CriticalShift);
    REQUIRE(t.sigma0.has_value());
    CHECK(*t.sigma0 > 0.0);
    // at the critical boundary every positive shift is inadmissible
    CHECK(t.termination == Termination::InadmissibleShift);
    CHECK(make_params(3, 0, *t.shifted_mu2).regime == Regime::Inadmissible);
}

TEST_CASE("subcritical p == p# recurses into the shifted bootstrap") {
    // wide admissible window: the shift stays admissible and iterates
    const OperatorParams p = make_params(5, 0, -2.0);
    const CriticalExponents ce = critical_exponents(p, 0.0);
    CHECK(ce.p_sharp == doctest::Approx(3.0).epsilon(1e-12));

    const LiouvilleTrace t = bootstrap(p, 0.0, ce.p_sharp, 1.0);
    CHECK(t.case_tag == CaseTag::Part3_CriticalShift);
    REQUIRE(t.sigma0.has_value());
    const OperatorParams shifted = make_params(5, 0, *t.shifted_mu2);
    CHECK(shifted.regime == Regime::Subcritical);
    CHECK(t.termination == Termination::DivergentMass);
    CHECK(t.tau_sequence.size() >= 2);
    // strictness of the recursion: p#(shifted) < p#(original)
    CHECK(critical_exponents(shifted, 0.0).p_sharp < ce.p_sharp);
    CHECK(replay(p, t));
}

TEST_CASE("gap law and termination bound over a p-grid") {
    const OperatorParams p = make_params(3, 0, -0.2);
    const CriticalExponents ce = critical_exponents(p, 0.0);
    for (double pexp = ce.p_sharp + 0.05; pexp < ce.q_sharp_measure; pexp += 0.11) {
        const LiouvilleTrace t = bootstrap(p, 0.0, pexp, 1.0);
        REQUIRE(t.case_tag == CaseTag::Part2_Bootstrap);
        const auto& tau = t.tau_sequence;
        REQUIRE(tau.size() >= 2);
        const double gap0 = tau[1] - tau[0];
        for (size_t j = 1; j + 1 < tau.size(); ++j) {
            const double gap = tau[j + 1] - tau[j];
            const double expect = std::pow(pexp, j) * gap0;
            CHECK(std::abs(gap - expect) <= 1e-12 * std::abs(expect));
        }
        for (size_t j = 0; j + 1 < tau.size(); ++j) CHECK(tau[j + 1] < tau[j]);
        const ExponentData e = exponent_data(p);
        const double bound = 2.0 + std::ceil(std::log(std::abs((e.tau_minus - e.tau_plus) / gap0)) /
                                             std::log(pexp));
        CHECK(static_cast<double>(tau.size()) <= std::max(bound, 2.0));
    }
}

TEST_CASE("verdict monotonicity in p and hypothesis gates") {
    const OperatorParams p = make_params(3, 0, -0.2);
    bool seen_nonexistent = false;
    for (double pexp = 1.0; pexp <= 14.0; pexp += 0.25) {
        const LiouvilleVerdict v = liouville_verdict(p, 0.0, pexp, 1.0);
        if (seen_nonexistent) CHECK(v.nonexistent);
        seen_nonexistent = seen_nonexistent || v.nonexistent;
    }
    CHECK(seen_nonexistent);

    CHECK_THROWS_AS(liouville_verdict(make_params(3, 0, 0.1), 0.0, 5.0, 1.0), HypothesisError);
    CHECK_THROWS_AS(liouville_verdict(make_params(2.5, 0, -0.05), 0.0, 5.0, 1.0),
                    HypothesisError);
    CHECK_THROWS_AS(liouville_verdict(make_params(3, 1.5, -0.05), 0.0, 5.0, 1.0),
                    HypothesisError);
    CHECK_THROWS_AS(liouville_verdict(make_params(3, 0, -0.2), -2.5, 5.0, 1.0), HypothesisError);
}

TEST_CASE("divergent-mass exponents agree with the Poisson gate") {
    const OperatorParams p = make_params(3, 0, -0.2);
    for (double pexp : {9.0, 9.4, 10.0, 12.0}) {
        const LiouvilleTrace t = bootstrap(p, 0.0, pexp, 1.0);
        REQUIRE(t.termination == Termination::DivergentMass);
        const double theta_prime = t.theta + pexp * t.tau_sequence.back();
        const GateResult gate = weighted_l1_gate(p, power_source(theta_prime), 0.5);
        CHECK_FALSE(gate.integrable);
    }
}

TEST_CASE("certificate JSON carries a consistent replay hash") {
    const OperatorParams p = make_params(3, 0, -0.2);
    const LiouvilleVerdict v = liouville_verdict(p, 0.0, 9.0, 1.0);
    const std::string a = certificate_json(p, v);
    const std::string b = certificate_json(p, v);
    CHECK(a == b);
    CHECK(a.find("\"replay_hash\":\"") != std::string::npos);
    CHECK(a.find("\"case_tag\":\"Part2_Bootstrap\"") != std::string::npos);
    CHECK(a.find("\"termination\":\"DivergentMass\"") != std::string::npos);
    // different trace, different hash
    const LiouvilleVerdict w = liouville_verdict(p, 0.0, 10.0, 1.0);
    auto hash_of = [](const std::string& s) {
        const size_t pos = s.find("replay_hash");
        return s.substr(pos, 32);
    };
    CHECK(hash_of(a) != hash_of(certificate_json(p, w)));
}

TEST_CASE("numeric step witness") {
    const OperatorParams p = make_params(3, 0, -0.2);
    const LiouvilleTrace t = bootstrap(p, 0.0, 9.0, 1.0);
    REQUIRE(t.tau_sequence.size() == 2);

    // first step: domination with positive margin away from the boundary
    const WitnessReport w0 =
        numeric_step_witness(p, 0.0, 9.0, 1.0, t.tau_sequence[0], t.d_sequence[0], 0.5);
    CHECK_FALSE(w0.terminal_divergence);
    CHECK(w0.dominated);
    CHECK(w0.min_margin >= -1e-8);
    CHECK(w0.min_margin_interior > 0.0);
    CHECK(w0.d_next == doctest::Approx(t.d_sequence[1]).epsilon(1e-12));

    // terminal step: the gate itself witnesses the contradiction
    const WitnessReport w1 =
        numeric_step_witness(p, 0.0, 9.0, 1.0, t.tau_sequence[1], t.d_sequence[1], 0.5);
    CHECK(w1.terminal_divergence);

    // degenerate potential dominates trivially
    const WitnessReport wz = numeric_step_witness(p, 0.0, 9.0, 0.0, t.tau_sequence[0], 1.0, 0.5);
    CHECK(wz.dominated);
}
