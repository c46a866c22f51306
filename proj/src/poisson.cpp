#include "ckn/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ckn/errors.hpp"
#include "ckn/format.hpp"
#include "ckn/operators.hpp"

namespace ckn {

SourceTerm power_source(double theta, double amplitude) {
    return {power_profile(theta, amplitude), theta};
}

SourceTerm constant_source(double value) {
    return {constant_profile(value), 0.0};
}

SourceTerm tabulated_source(const std::vector<std::array<double, 2>>& samples,
                            double theta_hint) {
    if (samples.size() < 2)
        throw std::invalid_argument("tabulated_source: need at least 2 samples");
    for (size_t i = 0; i + 1 < samples.size(); ++i)
        if (!(samples[i + 1][0] > samples[i][0]) || !(samples[i][0] > 0.0))
            throw std::invalid_argument("tabulated_source: radii must be positive increasing");

    SourceTerm src;
    src.theta_hint = theta_hint;
    src.profile.smoothness = Smoothness::C0;
    src.profile.eval = [samples, theta_hint](double r) {
        if (r <= samples.front()[0])
            return samples.front()[1] * std::pow(r / samples.front()[0], theta_hint);
        if (r >= samples.back()[0]) return 0.0;
        size_t lo = 0, hi = samples.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (samples[mid][0] <= r ? lo : hi) = mid;
        }
        const double t = (r - samples[lo][0]) / (samples[hi][0] - samples[lo][0]);
        return (1.0 - t) * samples[lo][1] + t * samples[hi][1];
    };
    return src;
}

// ---------------------------------------------------------------------------
// Weighted L1 gate
// ---------------------------------------------------------------------------

GateResult weighted_l1_gate(const OperatorParams& p, const SourceTerm& f, double R,
                            const QuadratureSpec& spec) {
    if (!(R > 0.0)) throw std::invalid_argument("weighted_l1_gate: R must be positive");
    const ExponentData e = exponent_data(p);
    const double wexp = e.tau_plus - p.mu1 + p.N - 1.0;

    GateResult res;
    res.analytic_exponent = f.theta_hint + wexp + 1.0;
    res.numeric_exponent = std::numeric_limits<double>::quiet_NaN();

    auto F = [&](double s) { return std::abs(f.profile.eval(s)) * std::pow(s, wexp); };

    // Panel scan on shrinking inner cutoffs: the ratio of consecutive panel
    // masses tends to cluster_ratio^(analytic exponent).
    const double q = spec.cluster_ratio;
    const int levels = std::min(spec.max_levels, 48);
    std::vector<double> deltas;
    deltas.reserve(levels);
    double hi = R, sum = 0.0;
    for (int k = 0; k < levels; ++k) {
        const double lo = hi * q;
        const QuadratureResult panel =
            ckn::integrate_smooth(F, lo, hi, QuadratureSpec{1e-12, 1e-300, 8, 0.5});
        deltas.push_back(panel.value);
        sum += panel.value;
        hi = lo;
    }

    // Ratio estimate over the deepest panels (skipping the transient where
    // the bounded factor of f still varies).
    const int k0 = std::max(12, levels / 2);
    std::vector<double> ratios;
    for (int k = k0; k + 1 < levels; ++k) {
        if (deltas[k] > 0.0 && std::isfinite(deltas[k + 1] / deltas[k]))
            ratios.push_back(deltas[k + 1] / deltas[k]);
    }

    bool all_zero = true;
    for (int k = k0; k < levels; ++k)
        if (deltas[k] != 0.0) all_zero = false;

    const double kappa = 1e-4;
    bool numeric_integrable = false;
    if (all_zero) {
        res.numeric_decisive = true;
        numeric_integrable = true;
        res.numeric_exponent = std::numeric_limits<double>::infinity();
    } else if (ratios.size() >= 4) {
        std::vector<double> sorted = ratios;
        std::sort(sorted.begin(), sorted.end());
        const double rho = sorted[sorted.size() / 2];
        res.numeric_exponent = std::log(rho) / std::log(q);
        if (rho <= 1.0 - kappa) {
            res.numeric_decisive = true;
            numeric_integrable = true;
        } else if (rho >= 1.0 + kappa) {
            res.numeric_decisive = true;
            numeric_integrable = false;
        }
    }

    const bool analytic_integrable = res.analytic_exponent > 0.0;
    if (res.numeric_decisive && numeric_integrable != analytic_integrable) {
        std::ostringstream msg;
        msg << "weighted_l1_gate: theta_hint inconsistent with observed decay "
            << "(analytic exponent " << res.analytic_exponent << ", numeric exponent "
            << res.numeric_exponent << ")";
        throw NumericalError(msg.str());
    }

    res.integrable = analytic_integrable;
    if (res.integrable) {
        // close the geometric tail beyond the scanned panels
        double rho = std::pow(q, res.analytic_exponent);
        if (!(rho < 1.0)) rho = 0.0;
        res.value = sum + deltas.back() * rho / (1.0 - rho);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Green representation
// ---------------------------------------------------------------------------

namespace {

QuadratureSpec inner_spec(const QuadratureSpec& spec) {
    QuadratureSpec s = spec;
    s.rel_tol = std::min(spec.rel_tol, 1e-11);
    return s;
}

} // namespace

GreenSolution green_solve(const OperatorParams& p, const SourceTerm& f, double R, double k,
                          const QuadratureSpec& spec) {
    if (p.regime == Regime::Inadmissible)
        throw std::invalid_argument(
            "green_solve: no real characteristic exponents; the Poisson problem admits no "
            "nonnegative solution for a nonnegative nonzero source");
    if (!(R > 0.0)) throw std::invalid_argument("green_solve: R must be positive");
    if (p.regime == Regime::Critical && R > 1.0)
        throw std::invalid_argument(
            "green_solve: Critical regime requires R <= 1 (logarithmic basis changes sign)");

    GreenSolution sol;
    sol.gate = weighted_l1_gate(p, f, R, spec);
    if (!sol.gate.integrable)
        throw std::invalid_argument(
            "green_solve: source mass diverges in the weighted L1 norm; "
            "no nonnegative solution exists");

    sol.k = k;
    sol.R = R;
    sol.regime = p.regime;

    const ExponentData e = exponent_data(p);
    const QuadratureSpec qs = inner_spec(spec);
    const auto fr = f.profile.eval;

    if (p.regime == Regime::Subcritical) {
        const double tm = e.tau_minus, tp = e.tau_plus;
        const double span = tp - tm;
        const double wp = 1.0 - tm;  // = tau_+ - mu1 + N - 1
        const double wm = 1.0 - tp;  // = tau_- - mu1 + N - 1

        sol.resonant = std::abs(f.theta_hint + 2.0 - tp) <= 1e-9 * (1.0 + std::abs(tp));
        sol.canonical_particular = !sol.resonant && (f.theta_hint + 2.0 - tp >= 1e-3);

        auto I1 = [=](double r) {
            return integrate_singular([=](double s) { return fr(s) * std::pow(s, wp); }, r,
                                      qs).value;
        };

        std::function<double(double)> part, dpart, d2part;
        if (sol.canonical_particular) {
            auto I0 = [=](double r) {
                return integrate_singular([=](double s) { return fr(s) * std::pow(s, wm); },
                                          r, qs).value;
            };
            part = [=](double r) {
                return (std::pow(r, tm) * I1(r) - std::pow(r, tp) * I0(r)) / span;
            };
            dpart = [=](double r) {
                return (tm * std::pow(r, tm - 1.0) * I1(r) - tp * std::pow(r, tp - 1.0) * I0(r)) /
                       span;
            };
            d2part = [=](double r) {
                return (tm * (tm - 1.0) * std::pow(r, tm - 2.0) * I1(r) -
                        tp * (tp - 1.0) * std::pow(r, tp - 2.0) * I0(r)) /
                           span -
                       fr(r);
            };
        } else {
            // outer form: integral from r to R multiplying Gamma
            auto J2 = [=](double r) {
                return integrate_smooth([=](double s) { return fr(s) * std::pow(s, wm); },
                                        r, R, qs).value;
            };
            part = [=](double r) {
                return (std::pow(r, tm) * I1(r) + std::pow(r, tp) * J2(r)) / span;
            };
            dpart = [=](double r) {
                return (tm * std::pow(r, tm - 1.0) * I1(r) + tp * std::pow(r, tp - 1.0) * J2(r)) /
                       span;
            };
            d2part = [=](double r) {
                return (tm * (tm - 1.0) * std::pow(r, tm - 2.0) * I1(r) +
                        tp * (tp - 1.0) * std::pow(r, tp - 2.0) * J2(r)) /
                           span -
                       fr(r);
            };
        }

        sol.boundary_coeff = -(k * std::pow(R, tm) + part(R)) / std::pow(R, tp);
        const double b = sol.boundary_coeff;
        sol.u = [=](double r) { return k * std::pow(r, tm) + part(r) + b * std::pow(r, tp); };
        sol.du = [=](double r) {
            return k * tm * std::pow(r, tm - 1.0) + dpart(r) + b * tp * std::pow(r, tp - 1.0);
        };
        sol.d2u = [=](double r) {
            return k * tm * (tm - 1.0) * std::pow(r, tm - 2.0) + d2part(r) +
                   b * tp * (tp - 1.0) * std::pow(r, tp - 2.0);
        };
        sol.particular.eval = part;
        sol.particular.deriv1 = dpart;
        sol.particular.deriv2 = d2part;
        sol.particular.support_radius = R;
    } else {
        // Critical regime: basis {Phi, Gamma} = {r^t0 (-ln r), r^t0}
        const double t0 = e.tau_zero;
        const double w = 1.0 - t0;

        auto J1 = [=](double r) {
            return integrate_singular([=](double s) { return fr(s) * std::pow(s, w); }, r,
                                      qs).value;
        };
        auto Jlog = [=](double r) {
            return integrate_singular(
                       [=](double s) { return -std::log(s) * fr(s) * std::pow(s, w); }, r,
                       qs).value;
        };
        auto Phi = [=](double r) { return -std::pow(r, t0) * std::log(r); };
        auto dPhi = [=](double r) { return std::pow(r, t0 - 1.0) * (-t0 * std::log(r) - 1.0); };
        auto d2Phi = [=](double r) {
            return std::pow(r, t0 - 2.0) * (-t0 * (t0 - 1.0) * std::log(r) - (2.0 * t0 - 1.0));
        };

        auto part = [=](double r) { return Phi(r) * J1(r) - std::pow(r, t0) * Jlog(r); };
        auto dpart = [=](double r) {
            return dPhi(r) * J1(r) - t0 * std::pow(r, t0 - 1.0) * Jlog(r);
        };
        auto d2part = [=](double r) {
            return d2Phi(r) * J1(r) - t0 * (t0 - 1.0) * std::pow(r, t0 - 2.0) * Jlog(r) - fr(r);
        };

        sol.boundary_coeff = -(k * Phi(R) + part(R)) / std::pow(R, t0);
        const double b = sol.boundary_coeff;
        sol.u = [=](double r) { return k * Phi(r) + part(r) + b * std::pow(r, t0); };
        sol.du = [=](double r) {
            return k * dPhi(r) + dpart(r) + b * t0 * std::pow(r, t0 - 1.0);
        };
        sol.d2u = [=](double r) {
            return k * d2Phi(r) + d2part(r) + b * t0 * (t0 - 1.0) * std::pow(r, t0 - 2.0);
        };
        sol.particular.eval = part;
        sol.particular.deriv1 = dpart;
        sol.particular.deriv2 = d2part;
        sol.particular.support_radius = R;
    }

    // sample grid on [R/100, R]: below that the homogeneous cancellation in
    // the residual is dominated by double roundoff
    const int n = 96;
    sol.grid.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = R * std::pow(1e-2, 1.0 - static_cast<double>(i) / (n - 1));
        sol.grid.push_back({r, sol.u(r)});
    }
    return sol;
}

RadialProfile solution_profile(const GreenSolution& sol) {
    RadialProfile p;
    p.eval = sol.u;
    p.deriv1 = sol.du;
    p.deriv2 = sol.d2u;
    p.support_radius = sol.R;
    return p;
}

// ---------------------------------------------------------------------------
// Singularity classification
// ---------------------------------------------------------------------------

std::vector<std::array<double, 2>> sample_for_extrapolation(const GreenSolution& sol, int count) {
    std::vector<std::array<double, 2>> s;
    s.reserve(count);
    const double r0 = 1e-2 * sol.R;
    const double ratio = std::sqrt(0.1);
    double r = r0;
    for (int i = 0; i < count; ++i) {
        s.push_back({r, sol.u(r)});
        r *= ratio;
    }
    return s;
}

CoefficientFit singular_coefficient(const OperatorParams& p,
                                    const std::vector<std::array<double, 2>>& samples) {
    if (samples.size() < 5)
        throw std::invalid_argument("singular_coefficient: need at least 5 samples");
    const ExponentData e = exponent_data(p);

    const double grid_ratio = samples[1][0] / samples[0][0];
    if (!(grid_ratio > 0.0) || !(grid_ratio < 1.0))
        throw std::invalid_argument("singular_coefficient: samples must decrease geometrically");

    std::vector<double> y;
    y.reserve(samples.size());
    if (p.regime == Regime::Critical) {
        for (const auto& s : samples) {
            if (!(s[0] < 1.0))
                throw std::invalid_argument(
                    "singular_coefficient: Critical-regime samples must satisfy r < 1");
            y.push_back(s[1] / (std::pow(s[0], e.tau_zero) * (-std::log(s[0]))));
        }
        // model y = k + b/L + c/L^2 with L = -ln r; solve from the deepest 3,
        // check the 4th against the fit
        const size_t n = samples.size();
        double M[3][4];
        for (int i = 0; i < 3; ++i) {
            const double L = -std::log(samples[n - 3 + i][0]);
            M[i][0] = 1.0;
            M[i][1] = 1.0 / L;
            M[i][2] = 1.0 / (L * L);
            M[i][3] = y[n - 3 + i];
        }
        for (int c = 0; c < 3; ++c) {  // Gaussian elimination, partial pivot
            int piv = c;
            for (int r2 = c + 1; r2 < 3; ++r2)
                if (std::abs(M[r2][c]) > std::abs(M[piv][c])) piv = r2;
            std::swap(M[c], M[piv]);
            for (int r2 = 0; r2 < 3; ++r2) {
                if (r2 == c || M[c][c] == 0.0) continue;
                const double fct = M[r2][c] / M[c][c];
                for (int cc = c; cc < 4; ++cc) M[r2][cc] -= fct * M[c][cc];
            }
        }
        const double khat = M[0][3] / M[0][0];
        const double bhat = M[1][3] / M[1][1];
        const double chat = M[2][3] / M[2][2];
        const double Lchk = -std::log(samples[n - 4][0]);
        const double pred = khat + bhat / Lchk + chat / (Lchk * Lchk);
        const double scale = std::abs(y[n - 1] - y[n - 4]) + 1e-12 * (1.0 + std::abs(khat));
        if (std::abs(pred - y[n - 4]) > 0.5 * scale)
            throw NumericalError("singular_coefficient: no clean tau_- asymptote (log fit)");
        return {khat, 1.0};
    }

    for (const auto& s : samples) y.push_back(s[1] * std::pow(s[0], -e.tau_minus));

    const size_t n = y.size();

    // fast-converging corrections plateau below quadrature noise; take the tail
    double tail_spread = 0.0;
    for (size_t i = n - 4; i < n; ++i) tail_spread = std::max(tail_spread, std::abs(y[i] - y[n - 1]));
    if (tail_spread <= 1e-9 * (1.0 + std::abs(y[n - 1])))
        return {y[n - 1], std::numeric_limits<double>::infinity()};

    std::vector<double> d;
    for (size_t i = 0; i + 1 < n; ++i) d.push_back(y[i + 1] - y[i]);

    // geometric decay of the corrections
    std::vector<double> c;
    const size_t m0 = d.size() >= 8 ? d.size() - 8 : 0;
    for (size_t i = m0; i + 1 < d.size(); ++i)
        if (d[i] != 0.0 && std::isfinite(d[i + 1] / d[i])) c.push_back(d[i + 1] / d[i]);
    if (c.size() < 3) throw NumericalError("singular_coefficient: no clean tau_- asymptote");
    std::vector<double> sorted = c;
    std::sort(sorted.begin(), sorted.end());
    const double chat = sorted[sorted.size() / 2];
    if (!(std::abs(chat) < 0.98))
        throw NumericalError("singular_coefficient: no clean tau_- asymptote (corrections "
                             "do not contract)");

    // Aitken on the last triple
    const double d1 = y[n - 2] - y[n - 3];
    const double d2 = y[n - 1] - y[n - 2];
    const double den = d2 - d1;
    double khat = y.back();
    if (std::abs(den) > 1e-15 * (std::abs(d2) + std::abs(y.back())))
        khat = y[n - 1] - d2 * d2 / den;
    return {khat, std::log(std::abs(chat)) / std::log(grid_ratio)};
}

double verify_solution(const OperatorParams& p, const GreenSolution& sol, const SourceTerm& f,
                       double r_lo, double r_hi) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || r_hi > sol.R * (1.0 + 1e-12))
        throw std::invalid_argument("verify_solution: need 0 < r_lo < r_hi <= R");
    const RadialProfile prof = solution_profile(sol);
    const int n = 48;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (n - 1));
        worst = std::max(worst, std::abs(apply_radial(p, prof, r) - f.profile.eval(r)));
    }
    return worst;
}

OrderingReport comparison_check(const OperatorParams&, const std::vector<double>& u1,
                                const std::vector<double>& u2, const std::vector<double>& grid,
                                double tol) {
    if (u1.size() != u2.size() || u1.size() != grid.size())
        throw std::invalid_argument("comparison_check: mismatched sample arrays");
    OrderingReport rep;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double gap = u1[i] - u2[i];
        if (gap > rep.max_violation) {
            rep.max_violation = gap;
            rep.at_r = grid[i];
        }
    }
    rep.ordered = rep.max_violation <= tol;
    return rep;
}

std::string solution_csv(const OperatorParams& p, const GreenSolution& sol, const SourceTerm& f) {
    const RadialProfile prof = solution_profile(sol);
    std::string out = "r,u,residual\n";
    for (const auto& g : sol.grid) {
        const double res = apply_radial(p, prof, g[0]) - f.profile.eval(g[0]);
        out += format_double17(g[0]) + "," + format_double17(g[1]) + "," + format_double17(res) +
               "\n";
    }
    return out;
}

std::string solution_summary_json(const GreenSolution& sol) {
    std::string out = "{";
    out += "\"boundary_coeff\":" + format_double17(sol.boundary_coeff);
    out += ",\"gate\":\"" + std::string(sol.gate.integrable ? "Integrable" : "Divergent") + "\"";
    out += ",\"k\":" + format_double17(sol.k);
    out += ",\"regime\":\"" + std::string(to_string(sol.regime)) + "\"";
    out += "}";
    return out;
}

} // namespace ckn
