#include "ckn/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ckn {

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
    return v;
}

namespace {

std::vector<double> parse_grid(const nlohmann::json& g) {
    std::vector<double> v;
    if (g.is_array()) {
        v = g.get<std::vector<double>>();
    } else if (g.is_object()) {
        v = linspace(g.at("min").get<double>(), g.at("max").get<double>(),
                     g.at("count").get<int>());
    } else {
        throw std::invalid_argument("config: a sweep grid must be an array or {min,max,count}");
    }
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        const bool up = v[1] > v[0];
        if ((up && !(v[i + 1] > v[i])) || (!up && !(v[i + 1] < v[i])))
            throw std::invalid_argument("config: sweep grids must be strictly monotone");
    }
    return v;
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    in >> j;

    RunConfig cfg;
    auto num = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = j.at(key).get<double>();
    };
    num("N", cfg.N);
    num("mu1", cfg.mu1);
    num("mu2", cfg.mu2);
    num("theta", cfg.theta);
    num("p", cfg.p);
    num("q0", cfg.q0);
    num("k", cfg.k);
    num("radius", cfg.domain_radius);
    num("rel_tol", cfg.quadrature.rel_tol);
    num("abs_tol", cfg.quadrature.abs_tol);
    if (j.contains("a")) {
        cfg.a = j.at("a").get<double>();
        cfg.a_set = true;
    }
    if (j.contains("max_levels")) cfg.quadrature.max_levels = j.at("max_levels").get<int>();
    if (j.contains("cluster_ratio"))
        cfg.quadrature.cluster_ratio = j.at("cluster_ratio").get<double>();
    if (j.contains("out")) cfg.output_dir = j.at("out").get<std::string>();
    if (j.contains("formats")) cfg.formats = j.at("formats").get<std::vector<std::string>>();

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (s.contains("axis1")) cfg.sweep_axis1 = s.at("axis1").get<std::string>();
        if (s.contains("axis2")) cfg.sweep_axis2 = s.at("axis2").get<std::string>();
        if (s.contains("grid1")) cfg.grid1 = parse_grid(s.at("grid1"));
        if (s.contains("grid2")) cfg.grid2 = parse_grid(s.at("grid2"));
    }
    for (const auto& f : cfg.formats)
        if (f != "json" && f != "csv")
            throw std::invalid_argument("config: formats must be a subset of {json, csv}");
    for (const std::string* ax : {&cfg.sweep_axis1, &cfg.sweep_axis2})
        if (*ax != "mu1" && *ax != "mu2" && *ax != "p")
            throw std::invalid_argument("config: sweep axes must come from {mu1, mu2, p}");
    if (cfg.sweep_axis1 == cfg.sweep_axis2)
        throw std::invalid_argument("config: sweep axes must differ");
    return cfg;
}

} // namespace ckn
