#include "ckn/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>

#include "ckn/errors.hpp"
#include "ckn/format.hpp"
#include "ckn/liouville.hpp"

namespace ckn {

namespace {

double axis_value(const std::string& axis, const std::string& name, double grid_value,
                  double fallback) {
    return axis == name ? grid_value : fallback;
}

std::string cell_row(const RunConfig& cfg, double g1, double g2) {
    const double mu1 = axis_value(cfg.sweep_axis1, "mu1", g1,
                                  axis_value(cfg.sweep_axis2, "mu1", g2, cfg.mu1));
    const double mu2 = axis_value(cfg.sweep_axis1, "mu2", g1,
                                  axis_value(cfg.sweep_axis2, "mu2", g2, cfg.mu2));
    const double p = axis_value(cfg.sweep_axis1, "p", g1,
                                axis_value(cfg.sweep_axis2, "p", g2, cfg.p));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    double p_sharp = nan, q_sharp = nan;
    std::string verdict;
    size_t trace_len = 0;

    try {
        const OperatorParams params = make_params(cfg.N, mu1, mu2);
        if (params.regime == Regime::Inadmissible) {
            verdict = "Inadmissible";
        } else {
            const ExponentData e = exponent_data(params);
            if (e.tau_plus < 0.0) {
                const CriticalExponents ce = critical_exponents(params, cfg.theta);
                p_sharp = ce.p_sharp;
                q_sharp = ce.q_sharp_measure;
            }
            try {
                const LiouvilleVerdict v = liouville_verdict(params, cfg.theta, p, cfg.q0);
                verdict = v.nonexistent ? "Nonexistent" : "Inconclusive";
                trace_len = v.trace.tau_sequence.size();
            } catch (const HypothesisError&) {
                verdict = "HypothesisError";
            }
        }
    } catch (const std::exception&) {
        verdict = "Error";
    }

    std::string row;
    row += format_double17(mu1) + "," + format_double17(mu2) + ",";
    row += format_double17(cfg.theta) + "," + format_double17(p) + ",";
    row += format_double17(p_sharp) + "," + format_double17(q_sharp) + ",";
    row += verdict + "," + std::to_string(trace_len) + "\n";
    return row;
}

} // namespace

std::string sweep_csv(const RunConfig& cfg, int threads) {
    auto default_grid = [&](const std::string& axis) -> std::vector<double> {
        if (axis == "mu1") return {cfg.mu1};
        if (axis == "mu2") return {cfg.mu2};
        return {cfg.p};
    };
    const std::vector<double> g1 = cfg.grid1.empty() ? default_grid(cfg.sweep_axis1) : cfg.grid1;
    const std::vector<double> g2 = cfg.grid2.empty() ? default_grid(cfg.sweep_axis2) : cfg.grid2;

    const size_t cells = g1.size() * g2.size();
    std::vector<std::string> rows(cells);
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < cells; i = next.fetch_add(1))
            rows[i] = cell_row(cfg, g1[i / g2.size()], g2[i % g2.size()]);
    };

    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(cells)));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::string csv = "mu1,mu2,theta,p,p_sharp,q_sharp,verdict,trace_len\n";
    for (const auto& r : rows) csv += r;
    return csv;
}

int sweep_thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("CKNKIT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    return hw;
}

} // namespace ckn
