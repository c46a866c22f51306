#pragma once

#include <string>
#include <vector>

#include "ckn/quadrature.hpp"

namespace ckn {

/// Run configuration shared by all CLI subcommands. A JSON config file fills
/// the fields; command-line flags override; everything has a usable default.
struct RunConfig {
    double N = 3.0;
    double mu1 = 0.0;
    double mu2 = -0.2;
    double theta = 0.0;
    double p = 9.0;
    double q0 = 1.0;
    double k = 0.0;
    double a = 0.0;  // CKN inequality weight; defaults to mu1/2 when unset
    bool a_set = false;
    double domain_radius = 1.0;
    QuadratureSpec quadrature;
    std::string output_dir;
    std::vector<std::string> formats = {"json"};

    // sweep axes: each in {"mu1", "mu2", "p"}; empty grids collapse to the
    // single configured value
    std::string sweep_axis1 = "mu2";
    std::string sweep_axis2 = "p";
    std::vector<double> grid1;
    std::vector<double> grid2;
};

RunConfig load_config(const std::string& path);

std::vector<double> linspace(double lo, double hi, int count);

} // namespace ckn
