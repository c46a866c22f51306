#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ckn/config.hpp"
#include "ckn/report.hpp"
#include "ckn/sweep.hpp"

using namespace ckn;

TEST_CASE("deterministic JSON: sorted keys, fixed float format") {
    nlohmann::json j;
    j["zeta"] = 1.0 / 3.0;
    j["alpha"] = 42;
    j["mid"] = {{"b", true}, {"a", "text\nline"}};
    j["arr"] = {1.5, 2, std::nan("")};
    const std::string s = dump_deterministic(j);
    CHECK(s ==
          "{\"alpha\":42,\"arr\":[1.5,2,null],\"mid\":{\"a\":\"text\\nline\",\"b\":true},"
          "\"zeta\":0.33333333333333331}");
    CHECK(dump_deterministic(j) == s);  // byte-stable
}

TEST_CASE("report envelope shape") {
    const nlohmann::json rep = make_report("demo", {{"N", 3.0}}, {{"x", 1.0}}, {"note-a"});
    const std::string s = dump_deterministic(rep);
    CHECK(s.find("\"command\":\"demo\"") != std::string::npos);
    CHECK(s.find("\"discrepancy_notes\":[\"note-a\"]") != std::string::npos);
    CHECK(s.find("\"version\":\"0.1.0\"") != std::string::npos);
}

TEST_CASE("config file round trip with grids") {
    const char* path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << R"({"N":4,"mu1":0.5,"mu2":-0.1,"theta":0.2,"p":6,"rel_tol":1e-9,
                   "formats":["json","csv"],
                   "sweep":{"axis1":"mu2","axis2":"p",
                            "grid1":{"min":-0.2,"max":-0.1,"count":3},
                            "grid2":[2,4,8]}})";
    }
    const RunConfig cfg = load_config(path);
    std::remove(path);
    CHECK(cfg.N == 4);
    CHECK(cfg.mu1 == 0.5);
    CHECK(cfg.quadrature.rel_tol == 1e-9);
    REQUIRE(cfg.grid1.size() == 3);
    CHECK(cfg.grid1[1] == doctest::Approx(-0.15));
    REQUIRE(cfg.grid2.size() == 3);
    CHECK(cfg.grid2[2] == 8);
    CHECK_THROWS_AS(load_config("nonexistent_config.json"), std::invalid_argument);

    {
        std::ofstream out(path);
        out << R"({"sweep":{"axis1":"p","axis2":"p"}})";
    }
    CHECK_THROWS_AS(load_config(path), std::invalid_argument);
    {
        std::ofstream out(path);
        out << R"({"sweep":{"grid1":[1.0,1.0,2.0]}})";  // not strictly monotone
    }
    CHECK_THROWS_AS(load_config(path), std::invalid_argument);
    std::remove(path);
}

TEST_CASE("sweep: deterministic across worker counts, robust to bad cells") {
    RunConfig cfg;
    cfg.N = 3;
    cfg.mu1 = 0;
    cfg.theta = 0;
    cfg.q0 = 1;
    cfg.sweep_axis1 = "mu2";
    cfg.sweep_axis2 = "p";
    cfg.grid1 = linspace(-0.30, -0.01, 6);  // includes inadmissible mu2 < -0.25
    cfg.grid2 = linspace(2.0, 12.0, 5);

    const std::string c1 = sweep_csv(cfg, 1);
    const std::string c2 = sweep_csv(cfg, 2);
    const std::string c5 = sweep_csv(cfg, 5);
    CHECK(c1 == c2);
    CHECK(c1 == c5);
    CHECK(c1.rfind("mu1,mu2,theta,p,p_sharp,q_sharp,verdict,trace_len\n", 0) == 0);
    CHECK(c1.find("Inadmissible") != std::string::npos);
    CHECK(c1.find("Nonexistent") != std::string::npos);
    CHECK(c1.find("Inconclusive") != std::string::npos);
    // 30 cells + header
    size_t lines = 0;
    for (char ch : c1)
        if (ch == '\n') ++lines;
    CHECK(lines == 31);
}

TEST_CASE("single-cell sweep mirrors the liouville verdict") {
    RunConfig cfg;
    cfg.N = 3;
    cfg.mu1 = 0;
    cfg.mu2 = -0.2;
    cfg.theta = 0;
    cfg.p = 9;
    const std::string csv = sweep_csv(cfg, 1);
    CHECK(csv.find("Nonexistent,2") != std::string::npos);
}
