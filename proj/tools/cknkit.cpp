// cknkit: command-line surface for the CKN-operator toolkit.
//
// Subcommands: exponents, fundamental, verify-identity, ckn-check, poisson,
// liouville, sweep. A JSON config (--config) supplies defaults; explicit
// flags win. Reports are deterministic JSON (sorted keys, 17 significant
// digits); CSV uses LF line endings. Exit codes: 0 success or mathematical
// finding, 2 invalid input / failed hypothesis, 3 numerical non-convergence.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckn/config.hpp"
#include "ckn/errors.hpp"
#include "ckn/format.hpp"
#include "ckn/liouville.hpp"
#include "ckn/operators.hpp"
#include "ckn/poisson.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/report.hpp"
#include "ckn/sweep.hpp"

namespace {

using nlohmann::json;

struct FlagSet {
    std::optional<double> N, mu1, mu2, theta, p, q0, k, a, radius, rel_tol, abs_tol;
    std::optional<std::string> config, out, format;
};

void add_common(CLI::App* cmd, FlagSet& f) {
    cmd->add_option("--N", f.N, "dimension (>= 2)");
    cmd->add_option("--mu1", f.mu1, "drift coefficient");
    cmd->add_option("--mu2", f.mu2, "Hardy coefficient");
    cmd->add_option("--theta", f.theta, "source/potential exponent at the origin");
    cmd->add_option("--p", f.p, "nonlinearity exponent");
    cmd->add_option("--q0", f.q0, "potential lower-bound constant");
    cmd->add_option("--k", f.k, "singular coefficient of the Poisson solution");
    cmd->add_option("--a", f.a, "CKN inequality weight (defaults to mu1/2)");
    cmd->add_option("--radius", f.radius, "domain radius R");
    cmd->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--config", f.config, "JSON config file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--format", f.format, "comma-separated subset of json,csv");
}

ckn::RunConfig resolve(const FlagSet& f) {
    ckn::RunConfig cfg;
    if (f.config) cfg = ckn::load_config(*f.config);
    if (f.N) cfg.N = *f.N;
    if (f.mu1) cfg.mu1 = *f.mu1;
    if (f.mu2) cfg.mu2 = *f.mu2;
    if (f.theta) cfg.theta = *f.theta;
    if (f.p) cfg.p = *f.p;
    if (f.q0) cfg.q0 = *f.q0;
    if (f.k) cfg.k = *f.k;
    if (f.a) {
        cfg.a = *f.a;
        cfg.a_set = true;
    }
    if (f.radius) cfg.domain_radius = *f.radius;
    if (f.rel_tol) cfg.quadrature.rel_tol = *f.rel_tol;
    if (f.abs_tol) cfg.quadrature.abs_tol = *f.abs_tol;
    if (f.out) cfg.output_dir = *f.out;
    if (f.format) {
        cfg.formats.clear();
        std::string s = *f.format;
        size_t pos = 0;
        while (pos <= s.size()) {
            const size_t comma = s.find(',', pos);
            const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
            if (tok != "json" && tok != "csv")
                throw std::invalid_argument("--format: expected subset of json,csv");
            cfg.formats.push_back(tok);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return cfg;
}

bool wants(const ckn::RunConfig& cfg, const std::string& fmt) {
    for (const auto& f : cfg.formats)
        if (f == fmt) return true;
    return false;
}

json inputs_json(const ckn::RunConfig& cfg) {
    json in;
    in["N"] = cfg.N;
    in["mu1"] = cfg.mu1;
    in["mu2"] = cfg.mu2;
    in["theta"] = cfg.theta;
    in["p"] = cfg.p;
    in["q0"] = cfg.q0;
    in["k"] = cfg.k;
    in["radius"] = cfg.domain_radius;
    in["rel_tol"] = cfg.quadrature.rel_tol;
    return in;
}

void emit(const ckn::RunConfig& cfg, const std::string& name, const json& report) {
    const std::string text = ckn::dump_deterministic(report);
    std::cout << text << "\n";
    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream out(std::filesystem::path(cfg.output_dir) / (name + ".json"),
                          std::ios::binary);
        out << text << "\n";
    }
}

void write_file(const ckn::RunConfig& cfg, const std::string& name, const std::string& text) {
    if (cfg.output_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(std::filesystem::path(cfg.output_dir) / name, std::ios::binary);
    out << text;
}

json exponent_payload(const ckn::OperatorParams& params, double theta,
                      std::vector<std::string>& notes) {
    const ckn::ExponentData e = ckn::exponent_data(params);
    json r;
    r["regime"] = ckn::to_string(params.regime);
    r["discriminant"] = e.discriminant;
    r["tau_minus"] = e.tau_minus;
    r["tau_plus"] = e.tau_plus;
    r["tau_zero"] = e.tau_zero;
    r["c_const"] = e.c_const;
    r["sphere_area"] = e.sphere_area;

    const ckn::HardyReduction h = ckn::hardy_reduction(params);
    r["hardy"] = {{"mu_tilde", h.mu_tilde}, {"exponent_shift", h.exponent_shift}};
    notes.push_back(ckn::notes::kHardyShiftSign);
    if (params.mu2 == 0.0) notes.push_back(ckn::notes::kCriticalLogForm);

    if (e.tau_plus < 0.0) {
        const ckn::CriticalExponents ce = ckn::critical_exponents(params, theta);
        r["critical_exponents"] = {{"p_sharp", ce.p_sharp},
                                   {"q_sharp", ce.q_sharp},
                                   {"q_sharp_measure", ce.q_sharp_measure},
                                   {"theta", theta}};
        notes.push_back(ckn::notes::kSerrinExponentVariants);
    } else {
        r["critical_exponents"] = nullptr;
    }
    return r;
}

int cmd_exponents(const ckn::RunConfig& cfg) {
    const ckn::OperatorParams params = ckn::make_params(cfg.N, cfg.mu1, cfg.mu2);
    if (params.regime == ckn::Regime::Inadmissible)
        throw ckn::HypothesisError("Inadmissible parameters: (2-N+mu1)^2 + 4*mu2 < 0");
    std::vector<std::string> notes;
    const json results = exponent_payload(params, cfg.theta, notes);
    emit(cfg, "exponents", ckn::make_report("exponents", inputs_json(cfg), results, notes));
    return 0;
}

int cmd_fundamental(const ckn::RunConfig& cfg) {
    const ckn::OperatorParams params = ckn::make_params(cfg.N, cfg.mu1, cfg.mu2);
    if (params.regime == ckn::Regime::Inadmissible)
        throw ckn::HypothesisError("Inadmissible parameters: (2-N+mu1)^2 + 4*mu2 < 0");
    std::vector<std::string> notes;
    json results = exponent_payload(params, cfg.theta, notes);

    const double R = cfg.domain_radius;
    json samples = json::array();
    std::string csv = "r,phi,gamma\n";
    const int n = 33;
    for (int i = 0; i < n; ++i) {
        const double r = R * std::pow(1e-2, 1.0 - static_cast<double>(i) / (n - 1));
        const double ph = ckn::phi(params, r), ga = ckn::gamma(params, r);
        samples.push_back({{"r", r}, {"phi", ph}, {"gamma", ga}});
        csv += ckn::format_double17(r) + "," + ckn::format_double17(ph) + "," +
               ckn::format_double17(ga) + "\n";
    }
    results["samples"] = samples;

    if (wants(cfg, "json"))
        emit(cfg, "fundamental", ckn::make_report("fundamental", inputs_json(cfg), results, notes));
    if (wants(cfg, "csv")) write_file(cfg, "fundamental.csv", csv);
    return 0;
}

int cmd_verify_identity(const ckn::RunConfig& cfg, bool tilted) {
    const ckn::OperatorParams params = ckn::make_params(cfg.N, cfg.mu1, cfg.mu2);
    if (params.regime == ckn::Regime::Inadmissible)
        throw ckn::HypothesisError("Inadmissible parameters: (2-N+mu1)^2 + 4*mu2 < 0");

    const ckn::TestFunction xi =
        tilted ? ckn::tilted_bump(1.0, static_cast<int>(std::llround(cfg.N)))
               : ckn::radial_test_function(ckn::bump_profile(1.0), cfg.N);
    const ckn::IdentityResult res = ckn::identity_residual(params, xi, cfg.quadrature);
    const double tol = 1e-6 * std::max(1.0, std::abs(res.expected));

    json r;
    r["lhs"] = res.lhs;
    r["expected"] = res.expected;
    r["residual"] = res.residual;
    r["converged"] = res.converged;
    r["tolerance"] = tol;
    r["pass"] = res.converged && std::abs(res.residual) <= tol;
    r["test_function"] = tilted ? "bump*(1+x1/2)" : "radial bump";
    emit(cfg, "verify-identity",
         ckn::make_report("verify-identity", inputs_json(cfg), r, {}));

    if (!res.converged) throw ckn::NumericalError("identity quadrature did not converge");
    if (std::abs(res.residual) > tol)
        throw ckn::NumericalError("identity residual exceeds tolerance");
    return 0;
}

int cmd_ckn_check(const ckn::RunConfig& cfg) {
    const double a = cfg.a_set ? cfg.a : 0.5 * cfg.mu1;
    if (!(a < 0.5 * (cfg.N - 2.0)))
        throw ckn::HypothesisError("ckn-check: requires a < (N-2)/2");

    struct Entry {
        const char* name;
        ckn::RadialProfile u;
    };
    std::vector<Entry> battery;
    auto add = [&](const char* name, std::function<double(double)> v,
                   std::function<double(double)> d) {
        ckn::RadialProfile u;
        u.eval = std::move(v);
        u.deriv1 = std::move(d);
        battery.push_back({name, std::move(u)});
    };
    add("exp(-r^2/2)", [](double r) { return std::exp(-0.5 * r * r); },
        [](double r) { return -r * std::exp(-0.5 * r * r); });
    add("exp(-r^2)", [](double r) { return std::exp(-r * r); },
        [](double r) { return -2.0 * r * std::exp(-r * r); });
    add("1/(1+r^2)", [](double r) { return 1.0 / (1.0 + r * r); },
        [](double r) { return -2.0 * r / ((1.0 + r * r) * (1.0 + r * r)); });
    add("exp(-r)", [](double r) { return std::exp(-r); },
        [](double r) { return -std::exp(-r); });

    json rows = json::array();
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& entry : battery) {
        const ckn::CknResult res = ckn::ckn_inequality_check(cfg.N, a, entry.u, cfg.quadrature);
        rows.push_back({{"function", entry.name},
                        {"lhs", res.lhs},
                        {"rhs", res.rhs},
                        {"ratio", res.ratio}});
        min_ratio = std::min(min_ratio, res.ratio);
    }

    json r;
    r["a"] = a;
    r["battery"] = rows;
    r["min_ratio"] = min_ratio;
    r["pass"] = min_ratio >= 1.0 - 1e-9;
    emit(cfg, "ckn-check", ckn::make_report("ckn-check", inputs_json(cfg), r, {}));
    return 0;
}

ckn::SourceTerm load_source_csv(const std::string& path, double theta_hint) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("poisson: cannot open source file " + path);
    std::vector<std::array<double, 2>> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double r, v;
        if (std::sscanf(line.c_str(), "%lf,%lf", &r, &v) == 2) samples.push_back({r, v});
    }
    return ckn::tabulated_source(samples, theta_hint);
}

int cmd_poisson(const ckn::RunConfig& cfg, const std::string& source_csv) {
    const ckn::OperatorParams params = ckn::make_params(cfg.N, cfg.mu1, cfg.mu2);
    if (params.regime == ckn::Regime::Inadmissible)
        throw ckn::HypothesisError("Inadmissible parameters: (2-N+mu1)^2 + 4*mu2 < 0");

    const ckn::SourceTerm f = source_csv.empty() ? ckn::power_source(cfg.theta)
                                                 : load_source_csv(source_csv, cfg.theta);
    const double R = cfg.domain_radius;
    std::vector<std::string> notes{ckn::notes::kAsymptoteNormalization};
    if (params.regime == ckn::Regime::Critical)
        notes.push_back(ckn::notes::kPowerLogPlainCoefficient);

    const ckn::GateResult gate = ckn::weighted_l1_gate(params, f, R, cfg.quadrature);
    json r;
    r["gate"] = gate.integrable ? "Integrable" : "Divergent";
    r["gate_exponent"] = gate.analytic_exponent;

    if (!gate.integrable) {
        // a finding, not a failure
        r["finding"] = "nonexistence: the source mass diverges in the weighted L1 norm "
                       "near the origin";
        emit(cfg, "poisson", ckn::make_report("poisson", inputs_json(cfg), r, notes));
        return 0;
    }

    const ckn::GreenSolution sol = ckn::green_solve(params, f, R, cfg.k, cfg.quadrature);
    const double resid = ckn::verify_solution(params, sol, f, R / 100.0, R);
    const ckn::CoefficientFit fit =
        ckn::singular_coefficient(params, ckn::sample_for_extrapolation(sol));
    if (sol.resonant) notes.push_back(ckn::notes::kPowerLogPlainCoefficient);

    r["k"] = sol.k;
    r["k_estimate"] = fit.k;
    r["boundary_coeff"] = sol.boundary_coeff;
    r["max_residual"] = resid;
    r["resonant"] = sol.resonant;
    r["regime"] = ckn::to_string(sol.regime);
    r["summary"] = json::parse(ckn::solution_summary_json(sol));

    if (wants(cfg, "json"))
        emit(cfg, "poisson", ckn::make_report("poisson", inputs_json(cfg), r, notes));
    if (wants(cfg, "csv")) write_file(cfg, "poisson_profile.csv", ckn::solution_csv(params, sol, f));
    return 0;
}

int cmd_liouville(const ckn::RunConfig& cfg) {
    const ckn::OperatorParams params = ckn::make_params(cfg.N, cfg.mu1, cfg.mu2);
    const ckn::LiouvilleVerdict v = ckn::liouville_verdict(params, cfg.theta, cfg.p, cfg.q0);

    json r;
    r["verdict"] = v.nonexistent ? "Nonexistent" : "Inconclusive";
    r["certificate"] = json::parse(ckn::certificate_json(params, v));
    emit(cfg, "liouville",
         ckn::make_report("liouville", inputs_json(cfg), r,
                          {ckn::notes::kSerrinExponentVariants, ckn::notes::kTerminationForm}));
    return 0;
}

int cmd_sweep(const ckn::RunConfig& cfg) {
    const int threads = ckn::sweep_thread_count();
    const std::string csv = ckn::sweep_csv(cfg, threads);
    write_file(cfg, "sweep.csv", csv);
    if (!cfg.output_dir.empty()) {
        size_t rows = 0;
        for (char c : csv)
            if (c == '\n') ++rows;
        json r;
        r["rows"] = rows - 1;
        r["file"] = "sweep.csv";
        emit(cfg, "sweep",
             ckn::make_report("sweep", inputs_json(cfg), r,
                              {ckn::notes::kSerrinExponentVariants,
                               ckn::notes::kTerminationForm}));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cknkit: numerics for the degenerate CKN operator "
                 "-Delta + mu1 x.grad/|x|^2 + mu2/|x|^2"};
    app.require_subcommand(1);

    FlagSet flags;
    bool tilted = false;
    std::string source_csv;
    CLI::App* c_exp = app.add_subcommand("exponents", "characteristic exponent calculus");
    CLI::App* c_fun = app.add_subcommand("fundamental", "fundamental solution samples");
    CLI::App* c_ver = app.add_subcommand("verify-identity",
                                         "quadrature check of the weighted identity");
    CLI::App* c_ckn = app.add_subcommand("ckn-check", "critical CKN inequality battery");
    CLI::App* c_poi = app.add_subcommand("poisson", "radial Poisson solve with gate");
    CLI::App* c_lio = app.add_subcommand("liouville", "nonexistence certificate");
    CLI::App* c_swp = app.add_subcommand("sweep", "phase-map parameter sweep");
    for (CLI::App* c : {c_exp, c_fun, c_ver, c_ckn, c_poi, c_lio, c_swp}) add_common(c, flags);
    c_ver->add_flag("--tilted", tilted, "use the non-radial bump*(1+x1/2) test function");
    c_poi->add_option("--source-csv", source_csv,
                      "tabulated source (r,f rows); --theta then acts as the origin hint");

    CLI11_PARSE(app, argc, argv);

    try {
        const ckn::RunConfig cfg = resolve(flags);
        if (c_exp->parsed()) return cmd_exponents(cfg);
        if (c_fun->parsed()) return cmd_fundamental(cfg);
        if (c_ver->parsed()) return cmd_verify_identity(cfg, tilted);
        if (c_ckn->parsed()) return cmd_ckn_check(cfg);
        if (c_poi->parsed()) return cmd_poisson(cfg, source_csv);
        if (c_lio->parsed()) return cmd_liouville(cfg);
        if (c_swp->parsed()) return cmd_sweep(cfg);
    } catch (const ckn::NumericalError& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"exit_code\":3}\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"exit_code\":2}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"exit_code\":3}\n";
        return 3;
    }
    return 0;
}
