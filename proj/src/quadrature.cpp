#include "ckn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ckn/errors.hpp"
#include "ckn/operators.hpp"

namespace ckn {

namespace {

// ---------------------------------------------------------------------------
// Gauss-Legendre rules, computed once per order by Newton iteration.
// ---------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> node;    // on (-1, 1)
    std::vector<double> weight;
};

GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n and P_n'
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.node[i] = -x;
        rule.weight[i] = w;
        rule.node[n - 1 - i] = x;
        rule.weight[n - 1 - i] = w;
    }
    return rule;
}

const GaussRule& gauss12() {
    static const GaussRule r = compute_gauss(12);
    return r;
}

const GaussRule& gauss24() {
    static const GaussRule r = compute_gauss(24);
    return r;
}

double gauss_apply(const GaussRule& rule, const std::function<double(double)>& g,
                   double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0, comp = 0.0;  // compensated: reduction order-independent to roundoff
    for (size_t i = 0; i < rule.node.size(); ++i) {
        const double term = rule.weight[i] * g(mid + half * rule.node[i]);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return half * sum;
}

struct PanelOut {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

// Adaptive bisection on one panel; error from the 12-vs-24 point comparison.
// The budget stops runaway refinement of integrands that are rough at the
// requested tolerance (the unconverged error estimate then reports it).
PanelOut panel_integrate(const std::function<double(double)>& g, double a, double b,
                         double tol, int depth, long& budget) {
    PanelOut out;
    const double i12 = gauss_apply(gauss12(), g, a, b);
    const double i24 = gauss_apply(gauss24(), g, a, b);
    out.evaluations = 36;
    budget -= 36;
    const double err = std::abs(i24 - i12);
    const double floor = 64.0 * 1e-16 * (std::abs(i24) + std::abs(i12));
    if (err <= std::max(tol, floor) || depth >= 20 || budget <= 0 ||
        (b - a) <= 1e-13 * (std::abs(a) + std::abs(b))) {
        out.value = i24;
        out.error = err;
        return out;
    }
    const double mid = 0.5 * (a + b);
    const PanelOut left = panel_integrate(g, a, mid, 0.5 * tol, depth + 1, budget);
    const PanelOut right = panel_integrate(g, mid, b, 0.5 * tol, depth + 1, budget);
    out.value = left.value + right.value;
    out.error = left.error + right.error;
    out.evaluations += left.evaluations + right.evaluations;
    return out;
}

// One Aitken delta-squared pass over a sequence of partial sums.
std::vector<double> aitken(const std::vector<double>& s) {
    std::vector<double> out;
    if (s.size() < 3) return out;
    for (size_t i = 0; i + 2 < s.size(); ++i) {
        const double d1 = s[i + 1] - s[i];
        const double d2 = s[i + 2] - s[i + 1];
        const double den = d2 - d1;
        const double scale = std::abs(s[i + 2]) + std::abs(d2);
        if (std::abs(den) <= 1e-15 * scale || !std::isfinite(den)) {
            out.push_back(s[i + 2]);
        } else {
            out.push_back(s[i + 2] - d2 * d2 / den);
        }
    }
    return out;
}

void validate(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (!(spec.cluster_ratio > 0.0) || !(spec.cluster_ratio < 1.0))
        throw std::invalid_argument("QuadratureSpec: cluster_ratio must lie in (0,1)");
    if (spec.max_levels < 4)
        throw std::invalid_argument("QuadratureSpec: max_levels too small");
}

} // namespace

QuadratureResult integrate_smooth(const std::function<double(double)>& g, double a, double b,
                                  const QuadratureSpec& spec) {
    validate(spec);
    QuadratureResult res;
    if (!(b > a)) return res;
    const double rough = std::abs(gauss_apply(gauss12(), g, a, b));
    const double tol = std::max(spec.abs_tol, spec.rel_tol * rough);
    long budget = 4'000'000;
    const PanelOut p = panel_integrate(g, a, b, tol, 0, budget);
    res.value = p.value;
    res.error_estimate = p.error;
    res.evaluations = p.evaluations;
    res.converged =
        res.error_estimate <= std::max(spec.rel_tol * std::abs(res.value), spec.abs_tol);
    return res;
}

QuadratureResult integrate_singular(const std::function<double(double)>& g, double R,
                                    const QuadratureSpec& spec) {
    validate(spec);
    if (!(R > 0.0)) throw std::invalid_argument("integrate_singular: R must be positive");

    const double q = spec.cluster_ratio;
    std::vector<double> deltas, sums;
    deltas.reserve(spec.max_levels);
    sums.reserve(spec.max_levels);

    QuadratureResult res;
    double hi = R, sum = 0.0, comp = 0.0, panel_err = 0.0;
    long budget = 8'000'000;
    auto target = [&]() { return std::max(spec.abs_tol, spec.rel_tol * std::abs(sum)); };

    bool tail_closed = false;
    double tail_bound = 0.0;
    for (int k = 0; k < spec.max_levels; ++k) {
        const double lo = hi * q;
        // scale the panel tolerance by a cheap single-rule estimate so the
        // first panels are not asked for an unreachable absolute accuracy
        const double rough = std::abs(gauss_apply(gauss12(), g, lo, hi));
        const double ptol =
            std::max(spec.abs_tol, spec.rel_tol * (std::abs(sum) + rough)) / 32.0;
        const PanelOut p = panel_integrate(g, lo, hi, ptol, 0, budget);
        const double y = p.value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        panel_err += p.error;
        res.evaluations += p.evaluations;
        deltas.push_back(p.value);
        sums.push_back(sum);
        hi = lo;

        if (k >= 3) {
            const double a2 = std::abs(deltas[k]), a1 = std::abs(deltas[k - 1]);
            if (a2 <= 0.01 * target() && a2 <= a1) {
                // close the remaining tail with the signed geometric model;
                // exact for power-law integrands, conservative otherwise
                const double rho_s = a1 > 0.0 ? deltas[k] / deltas[k - 1] : 0.0;
                double tail_est = 0.0;
                if (std::abs(rho_s) < 0.95) tail_est = deltas[k] * rho_s / (1.0 - rho_s);
                tail_bound = 0.5 * std::abs(tail_est) + 1e-16 * std::abs(sum);
                if (tail_bound <= 0.25 * target()) {
                    sum += tail_est;
                    tail_closed = true;
                    break;
                }
            }
        }
    }

    if (tail_closed) {
        res.value = sum;
        res.error_estimate = panel_err + tail_bound;
        res.converged =
            res.error_estimate <= std::max(spec.rel_tol * std::abs(res.value), spec.abs_tol);
        return res;
    }

    // Truncation is not negligible: close the panel series by extrapolation.
    // The deltas of power/log integrands follow (alpha + beta*k) rho^k on the
    // geometric panels, which two Aitken passes resolve; the result is cross-
    // checked against the plain geometric tail model.
    const size_t n = deltas.size();
    double rho = 0.0;
    int nr = 0;
    for (size_t i = n - std::min<size_t>(n, 6); i + 1 < n; ++i) {
        if (deltas[i] != 0.0 && std::isfinite(deltas[i + 1] / deltas[i])) {
            rho += deltas[i + 1] / deltas[i];
            ++nr;
        }
    }
    rho = nr > 0 ? rho / nr : 0.0;

    if (!(rho < 1.0) || !std::isfinite(sum)) {
        // growing or stagnant panels: divergent or unresolved
        res.value = sum;
        res.error_estimate = std::abs(deltas.back()) * spec.max_levels + panel_err;
        res.converged = false;
        return res;
    }

    const std::vector<double> a1 = aitken(sums);
    const std::vector<double> a2 = aitken(a1);
    double extrapolated = sum;
    double seq_unc = std::abs(deltas.back());
    if (!a2.empty()) {
        extrapolated = a2.back();
        seq_unc = a2.size() >= 2 ? std::abs(a2.back() - a2[a2.size() - 2]) : seq_unc;
    } else if (!a1.empty()) {
        extrapolated = a1.back();
        seq_unc = a1.size() >= 2 ? std::abs(a1.back() - a1[a1.size() - 2]) : seq_unc;
    }

    const double tail = extrapolated - sum;
    const double model_tail = rho > 0.0 ? deltas.back() * rho / (1.0 - rho) : 0.0;
    const double model_gap = std::abs(tail - model_tail);

    res.value = extrapolated;
    res.error_estimate = panel_err + seq_unc + std::min(model_gap, 0.5 * std::abs(tail));
    res.converged =
        std::isfinite(res.value) &&
        res.error_estimate <= std::max(spec.rel_tol * std::abs(res.value), spec.abs_tol);
    if (!res.converged) {
        // be conservative: a rejected extrapolation still reports its gap
        res.error_estimate = panel_err + seq_unc + model_gap + std::abs(tail) * 0.05;
    }
    return res;
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& g, double a,
                                       const QuadratureSpec& spec) {
    validate(spec);
    QuadratureResult res;
    std::vector<double> deltas;
    double lo = a, sum = 0.0, panel_err = 0.0;
    long budget = 8'000'000;
    auto target = [&]() { return std::max(spec.abs_tol, spec.rel_tol * std::abs(sum)); };

    bool closed = false;
    double tail_bound = 0.0;
    for (int m = 0; m < spec.max_levels; ++m) {
        const double hi = 2.0 * lo;
        const double rough = std::abs(gauss_apply(gauss12(), g, lo, hi));
        const double ptol =
            std::max(spec.abs_tol, spec.rel_tol * (std::abs(sum) + rough)) / 32.0;
        const PanelOut p = panel_integrate(g, lo, hi, ptol, 0, budget);
        sum += p.value;
        panel_err += p.error;
        res.evaluations += p.evaluations;
        deltas.push_back(p.value);
        lo = hi;
        if (m >= 2) {
            const double a2 = std::abs(deltas[m]), a1 = std::abs(deltas[m - 1]);
            if (a2 <= 0.05 * target() && a2 < a1) {
                const double rho = a1 > 0.0 ? std::min(a2 / a1, 0.9) : 0.0;
                tail_bound = a2 * rho / (1.0 - rho);
                if (tail_bound <= 0.25 * target()) {
                    closed = true;
                    break;
                }
            }
        }
    }
    res.value = sum;
    res.error_estimate = panel_err + (closed ? tail_bound : std::abs(deltas.back()) * 16.0);
    res.converged =
        closed && res.error_estimate <= std::max(spec.rel_tol * std::abs(res.value), spec.abs_tol);
    return res;
}

// ---------------------------------------------------------------------------
// Weighted distributional identity
// ---------------------------------------------------------------------------

namespace {

// Sphere average of L* xi on the sphere of radius r, times the sphere area.
// Dimension 2: trapezoid on the circle (spectrally accurate for smooth
// periodic integrands). Dimension 3: Gauss-Legendre in cos(theta) x trapezoid
// in azimuth.
class SphereIntegrator {
public:
    SphereIntegrator(const OperatorParams& p, const TestFunction& xi) : p_(p), xi_(xi) {
        n_ = static_cast<int>(std::llround(p.N));
        if (!xi.radial) {
            if (std::abs(p.N - n_) > 1e-12 || (n_ != 2 && n_ != 3))
                throw std::invalid_argument(
                    "identity_residual: non-radial test functions need integer N in {2,3}");
        }
        area_ = sphere_area(p.N);
    }

    double operator()(double r, long& evals) const {
        if (xi_.radial) {
            ++evals;
            return area_ * apply_adjoint(p_, xi_, Vec3{r, 0.0, 0.0});
        }
        if (n_ == 2) {
            const int M = 64;
            double acc = 0.0;
            for (int j = 0; j < M; ++j) {
                const double phi = 2.0 * M_PI * j / M;
                acc += apply_adjoint(p_, xi_, Vec3{r * std::cos(phi), r * std::sin(phi), 0.0});
            }
            evals += M;
            return acc * (2.0 * M_PI / M);
        }
        // N == 3
        const GaussRule& gl = gauss_cos_theta();
        const int M = 64;
        double acc = 0.0;
        for (size_t i = 0; i < gl.node.size(); ++i) {
            const double t = gl.node[i];  // cos(theta)
            const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
            double ring = 0.0;
            for (int j = 0; j < M; ++j) {
                const double phi = 2.0 * M_PI * j / M;
                ring += apply_adjoint(
                    p_, xi_, Vec3{r * st * std::cos(phi), r * st * std::sin(phi), r * t});
            }
            evals += M;
            acc += gl.weight[i] * ring * (2.0 * M_PI / M);
        }
        return acc;
    }

private:
    static const GaussRule& gauss_cos_theta() {
        static const GaussRule r = compute_gauss(32);
        return r;
    }

    OperatorParams p_;
    const TestFunction& xi_;
    int n_;
    double area_ = 0.0;
};

} // namespace

IdentityResult identity_residual(const OperatorParams& p, const TestFunction& xi,
                                 const QuadratureSpec& spec) {
    const ExponentData e = exponent_data(p);
    const double S = xi.support_radius;
    if (!(S > 0.0) || !std::isfinite(S))
        throw std::invalid_argument("identity_residual: test function needs compact support");

    const bool critical = (p.regime == Regime::Critical);
    const SphereIntegrator sphere(p, xi);

    long evals = 0;
    // Phi * weight * r^{N-1} collapses to r (multiplied by -ln r in the
    // Critical regime); only the reduced, bounded form is integrated.
    auto g = [&](double r) {
        const double w = critical ? r * (-std::log(r)) : r;
        return w * sphere(r, evals);
    };

    QuadratureResult inner;
    if (critical && S > 1.0) {
        // -ln r changes sign at 1: integrate the two pieces separately
        inner = integrate_singular(g, 1.0, spec);
        const QuadratureResult outer = integrate_smooth(g, 1.0, S, spec);
        inner.value += outer.value;
        inner.error_estimate += outer.error_estimate;
        inner.converged = inner.converged && outer.converged;
    } else {
        inner = integrate_singular(g, S, spec);
    }

    IdentityResult out;
    out.lhs = inner.value;
    out.expected = e.c_const * xi.value(Vec3{0.0, 0.0, 0.0});
    out.residual = out.lhs - out.expected;
    out.converged = inner.converged;
    out.evaluations = evals;
    return out;
}

// ---------------------------------------------------------------------------
// Critical CKN inequality
// ---------------------------------------------------------------------------

CknResult ckn_inequality_check(double N, double a, const RadialProfile& u,
                               const QuadratureSpec& spec) {
    if (!(a < 0.5 * (N - 2.0)))
        throw std::invalid_argument("ckn_inequality_check: requires a < (N-2)/2");

    auto du = [&](double r) {
        if (u.deriv1) return u.deriv1(r);
        const double h = std::max(1e-6, 1e-5 * r);
        return (u.eval(r + h) - u.eval(r - h)) / (2.0 * h);
    };

    const double area = sphere_area(N);
    auto g_lhs = [&](double r) {
        const double d = du(r);
        return d * d * std::pow(r, N - 1.0 - 2.0 * a);
    };
    auto g_rhs = [&](double r) {
        const double v = u.eval(r);
        return v * v * std::pow(r, N - 3.0 - 2.0 * a);
    };

    const bool bounded = std::isfinite(u.support_radius);
    const double split = bounded ? u.support_radius : 1.0;

    auto total = [&](const std::function<double(double)>& g, const char* side) {
        QuadratureResult in = integrate_singular(g, split, spec);
        if (!in.converged)
            throw NumericalError(std::string("ckn_inequality_check: ") + side +
                                 " integral diverges (or is unresolved) as r -> 0");
        QuadratureResult out;
        out.converged = true;
        if (!bounded) {
            out = integrate_to_infinity(g, split, spec);
            if (!out.converged)
                throw NumericalError(std::string("ckn_inequality_check: ") + side +
                                     " integral diverges (or is unresolved) as r -> infinity");
        }
        QuadratureResult res;
        res.value = in.value + out.value;
        res.error_estimate = in.error_estimate + out.error_estimate;
        res.converged = true;
        return res;
    };

    const QuadratureResult lhs = total(g_lhs, "gradient");
    const QuadratureResult rhs = total(g_rhs, "potential");

    CknResult res;
    const double hardy = 0.25 * (N - 2.0 - 2.0 * a) * (N - 2.0 - 2.0 * a);
    res.lhs = area * lhs.value;
    res.rhs = hardy * area * rhs.value;
    res.ratio = res.lhs / res.rhs;
    res.converged = true;
    return res;
}

} // namespace ckn
