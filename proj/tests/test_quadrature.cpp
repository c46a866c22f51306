#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ckn/errors.hpp"
#include "ckn/quadrature.hpp"

using namespace ckn;

namespace {

// xi(x) = |x|^2 * bump(|x|): vanishes to second order at the origin
RadialProfile r2_bump() {
    RadialProfile p;
    p.support_radius = 1.0;
    auto w = [](double r) { return 1.0 - r * r; };
    p.eval = [=](double r) {
        return r >= 1.0 ? 0.0 : r * r * w(r) * w(r) * w(r);
    };
    p.deriv1 = [=](double r) {
        if (r >= 1.0) return 0.0;
        return 2.0 * r * std::pow(w(r), 3) - 6.0 * r * r * r * w(r) * w(r);
    };
    p.deriv2 = [=](double r) {
        if (r >= 1.0) return 0.0;
        return 2.0 * std::pow(w(r), 3) - 30.0 * r * r * w(r) * w(r) +
               24.0 * std::pow(r, 4) * w(r);
    };
    return p;
}

TestFunction combine(const TestFunction& f, double a, const TestFunction& g, double b) {
    TestFunction t;
    t.support_radius = std::max(f.support_radius, g.support_radius);
    t.radial = f.radial && g.radial;
    t.dim = f.dim;
    t.value = [=](const Vec3& x) { return a * f.value(x) + b * g.value(x); };
    t.gradient = [=](const Vec3& x) -> Vec3 {
        const Vec3 u = f.gradient(x), v = g.gradient(x);
        return {a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]};
    };
    t.hessian_trace = [=](const Vec3& x) {
        return a * f.hessian_trace(x) + b * g.hessian_trace(x);
    };
    return t;
}

} // namespace

TEST_CASE("singular integrals against analytic antiderivatives") {
    {
        const QuadratureResult r =
            integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 1.0);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
    }
    {
        const QuadratureResult r = integrate_singular([](double x) { return -std::log(x); }, 1.0);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
        // int_0^1 r^a ln^2 r dr = 2/(a+1)^3
        const QuadratureResult r = integrate_singular(
            [](double x) { return std::pow(x, 0.3) * std::log(x) * std::log(x); }, 1.0);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(2.0 / (1.3 * 1.3 * 1.3)).epsilon(1e-10));
    }
}

TEST_CASE("polynomial-times-power integrands reproduce to near machine precision") {
    // (1-r^2)^3 r^{-1/2}: expansion gives 2 - 3*(2/5) + 3*(2/9) - 2/13
    const double exact = 2.0 - 3.0 * (2.0 / 5.0) + 3.0 * (2.0 / 9.0) - 2.0 / 13.0;
    const QuadratureResult r = integrate_singular(
        [](double x) {
            const double w = 1.0 - x * x;
            return w * w * w / std::sqrt(x);
        },
        1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-13));

    // plain degree-7 polynomial
    const QuadratureResult s =
        integrate_singular([](double x) { return std::pow(x, 7) - 2.0 * x * x; }, 1.0);
    CHECK(s.value == doctest::Approx(1.0 / 8.0 - 2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("random power exponents stress the tail extrapolation") {
    std::mt19937 rng(4321);
    std::uniform_real_distribution<double> ua(-0.95, 2.0);
    for (int i = 0; i < 40; ++i) {
        const double a = ua(rng);
        const QuadratureResult r =
            integrate_singular([=](double x) { return std::pow(x, a); }, 1.0);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(1.0 / (a + 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("divergent integrand is flagged, not silently summed") {
    const QuadratureResult r =
        integrate_singular([](double x) { return std::pow(x, -1.5); }, 1.0);
    CHECK_FALSE(r.converged);
    const QuadratureResult s = integrate_singular([](double x) { return 1.0 / x; }, 1.0);
    CHECK_FALSE(s.converged);
}

TEST_CASE("identity: interior test functions see zero") {
    const OperatorParams p = make_params(3, 0.3, -0.1);
    const TestFunction xi = radial_test_function(r2_bump(), 3);
    QuadratureSpec spec;
    spec.abs_tol = 1e-9;  // the exact value is 0: relative tolerances are vacuous
    const IdentityResult res = identity_residual(p, xi, spec);
    CHECK(res.converged);
    CHECK(std::abs(res.expected) == doctest::Approx(0.0));
    CHECK(std::abs(res.lhs) < 1e-8);
}

TEST_CASE("identity: classical anchors") {
    {
        const OperatorParams p = make_params(3, 0, 0);
        const IdentityResult res =
            identity_residual(p, radial_test_function(bump_profile(1.0), 3));
        CHECK(res.converged);
        CHECK(res.lhs == doctest::Approx(4.0 * M_PI).epsilon(1e-8));
    }
    {
        const OperatorParams p = make_params(2, 0, 0);
        const IdentityResult res =
            identity_residual(p, radial_test_function(bump_profile(1.0), 2));
        CHECK(res.converged);
        CHECK(res.lhs == doctest::Approx(2.0 * M_PI).epsilon(1e-8));
    }
}

TEST_CASE("identity: generic subcritical constant from the exponent module") {
    const OperatorParams p = make_params(2, 0.5, -0.05);
    const IdentityResult res = identity_residual(p, radial_test_function(bump_profile(1.0), 2));
    CHECK(res.converged);
    CHECK(res.expected == doctest::Approx(std::sqrt(0.05) * 2.0 * M_PI).epsilon(1e-12));
    CHECK(res.lhs == doctest::Approx(res.expected).epsilon(1e-6));
}

TEST_CASE("identity: linearity in the test function") {
    const OperatorParams p = make_params(3, 0.4, -0.05);
    const TestFunction f = radial_test_function(bump_profile(1.0), 3);
    const TestFunction g = radial_test_function(r2_bump(), 3);
    QuadratureSpec tight;
    tight.rel_tol = 1e-12;

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 3; ++i) {
        const double a = u(rng), b = u(rng);
        const IdentityResult fr = identity_residual(p, f, tight);
        const IdentityResult gr = identity_residual(p, g, tight);
        const IdentityResult cr = identity_residual(p, combine(f, a, g, b), tight);
        const double scale = std::abs(a * fr.lhs) + std::abs(b * gr.lhs) + 1.0;
        CHECK(std::abs(cr.lhs - (a * fr.lhs + b * gr.lhs)) < 1e-10 * scale);
    }
}

TEST_CASE("identity: non-radial tilt and translation in the plane") {
    const OperatorParams p = make_params(2, 0.5, -0.05);
    const TestFunction xi = tilted_bump(1.0, 2);
    const IdentityResult res = identity_residual(p, xi);
    CHECK(res.converged);
    CHECK(res.lhs == doctest::Approx(res.expected).epsilon(1e-5));

    const Vec3 z{0.2, -0.1, 0.0};
    const TestFunction shifted = translate(xi, z);
    const IdentityResult sres = identity_residual(p, shifted);
    CHECK(sres.converged);
    // value at the origin of the shifted function is xi(-z)
    const double expect = exponent_data(p).c_const * xi.value(Vec3{-z[0], -z[1], 0.0});
    CHECK(sres.expected == doctest::Approx(expect).epsilon(1e-12));
    CHECK(sres.lhs == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("identity: radial path is analytic in non-integer dimension") {
    const OperatorParams p = make_params(3.5, 0.7, -0.1);
    REQUIRE(p.regime == Regime::Subcritical);
    const IdentityResult res =
        identity_residual(p, radial_test_function(bump_profile(1.0), p.N));
    CHECK(res.converged);
    CHECK(res.lhs == doctest::Approx(res.expected).epsilon(1e-6));
}

TEST_CASE("identity: critical regime with support crossing r = 1") {
    const OperatorParams p = make_params(3, 1, -0.25 * (2.0 - 3.0 + 1.0) * (2.0 - 3.0 + 1.0));
    REQUIRE(p.regime == Regime::Critical);
    const IdentityResult res = identity_residual(p, radial_test_function(bump_profile(1.5), 3));
    CHECK(res.converged);
    CHECK(res.lhs == doctest::Approx(res.expected).epsilon(1e-6));
}

TEST_CASE("CKN inequality: Gaussian and Lorentzian against closed-form moments") {
    RadialProfile gauss;
    gauss.eval = [](double r) { return std::exp(-0.5 * r * r); };
    gauss.deriv1 = [](double r) { return -r * std::exp(-0.5 * r * r); };

    const CknResult g = ckn_inequality_check(3, 0, gauss);
    CHECK(g.converged);
    CHECK(g.lhs == doctest::Approx(1.5 * std::pow(M_PI, 1.5)).epsilon(1e-9));
    CHECK(g.rhs == doctest::Approx(0.5 * std::pow(M_PI, 1.5)).epsilon(1e-9));
    CHECK(g.ratio == doctest::Approx(3.0).epsilon(1e-9));

    RadialProfile lorentz;
    lorentz.eval = [](double r) { return 1.0 / (1.0 + r * r); };
    lorentz.deriv1 = [](double r) {
        return -2.0 * r / ((1.0 + r * r) * (1.0 + r * r));
    };
    const CknResult l = ckn_inequality_check(3, 0, lorentz);
    CHECK(l.lhs == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-9));
    CHECK(l.rhs == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-9));
    CHECK(l.ratio == doctest::Approx(2.0).epsilon(1e-9));

    CHECK_THROWS_AS(ckn_inequality_check(3, 0.6, gauss), std::invalid_argument);
}

namespace {

// power core r^{sigma+eps} with a C^1 cutoff on [1, 2]
RadialProfile near_extremal(double sigma, double eps) {
    RadialProfile u;
    const double t = sigma + eps;
    u.support_radius = 2.0;
    auto cut = [](double r) {
        if (r <= 1.0) return 1.0;
        if (r >= 2.0) return 0.0;
        const double s = r - 1.0;
        return 1.0 - s * s * (3.0 - 2.0 * s);
    };
    auto dcut = [](double r) {
        if (r <= 1.0 || r >= 2.0) return 0.0;
        const double s = r - 1.0;
        return -6.0 * s * (1.0 - s);
    };
    u.eval = [=](double r) { return std::pow(r, t) * cut(r); };
    u.deriv1 = [=](double r) {
        return t * std::pow(r, t - 1.0) * cut(r) + std::pow(r, t) * dcut(r);
    };
    return u;
}

} // namespace

TEST_CASE("CKN inequality: near-extremal family approaches ratio 1 from above") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-6;  // the slowly-decaying core needs only modest accuracy here
    for (auto [N, a] : std::initializer_list<std::array<double, 2>>{{3, 0}, {3, 0.4}, {4, -0.5}}) {
        const double sigma = 0.5 * (2.0 - N + 2.0 * a);
        double eps = 0.05 * std::abs(sigma);
        double ratio = 1e9;
        for (int i = 0; i < 8 && ratio >= 1.05; ++i, eps *= 0.25) {
            const CknResult res = ckn_inequality_check(N, a, near_extremal(sigma, eps), spec);
            CHECK(res.ratio >= 1.0 - 1e-9);
            ratio = res.ratio;
        }
        CHECK(ratio < 1.05);  // the family member with small enough eps reaches it
    }
}

TEST_CASE("divergent CKN integrals raise a diagnosis") {
    RadialProfile bad;  // no decay: diverges at infinity
    bad.eval = [](double) { return 1.0; };
    bad.deriv1 = [](double) { return 0.0; };
    CHECK_THROWS_AS(ckn_inequality_check(3, 0, bad), NumericalError);
}
