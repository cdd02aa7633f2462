#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "mpqc/harness.hpp"

using namespace mpqc;

TEST_CASE("fit r-squared is exact on exact quadratics") {
  std::vector<double> x{1, 4, 9, 16}, y{3, 12, 27, 48};  // y = 3 x
  CHECK(fit_r_squared(x, y) == doctest::Approx(1.0));
}

TEST_CASE("security budget counts kappa and measures the detection rate") {
  auto cnot = Circuit::parse("WIRES 2\nCNOT 1 2\nOUT 1 1\nOUT 2 2\n");
  auto b1 = security_budget(7, 4, cnot, 2000, 1);
  CHECK(b1.kappa == 7);
  auto t1 = Circuit::parse("WIRES 1\nT 1\nOUT 1 1\n");
  auto b2 = security_budget(7, 4, t1, 2000, 1);
  CHECK(b2.kappa == 8);
  CHECK(b2.measured_detection > 0.45);
  CHECK(b2.measured_detection < 0.55);
}

TEST_CASE("compare_real_vs_ideal is exactly zero for honest frame runs") {
  NetworkConfig cfg;
  cfg.n = 7;
  cfg.s = 2;
  cfg.backend = BackendKind::Frame;
  auto rep = compare_real_vs_ideal(cfg, Circuit::parse("WIRES 2\nCNOT 1 2\nOUT 1 1\nOUT 2 2\n"),
                                   {InputState::plus(), InputState::one()}, "honest", {},
                                   {1, 2, 3});
  CHECK(rep.runs == 3);
  CHECK(rep.max_discrepancy == 0.0);
  CHECK(rep.min_fidelity >= 1.0 - 1e-12);
  CHECK_FALSE(rep.all_bottom);
}

TEST_CASE("scenario runs are reproducible and write reports") {
  const std::string dir = "/tmp/mpqc-harness-test";
  std::filesystem::remove_all(dir);
  auto a = run_scenario("vmagic-detection", 11, dir);
  auto b = run_scenario("vmagic-detection", 11, "");
  CHECK(a.pass);
  CHECK(a.json_report == b.json_report);
  CHECK(std::filesystem::exists(dir + "/vmagic-detection.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("custom experiment specs emit run reports") {
  ExperimentSpec spec;
  spec.cfg.n = 7;
  spec.cfg.s = 1;
  spec.cfg.backend = BackendKind::Frame;
  spec.circuit = Circuit::parse("WIRES 2\nOUT 1 1\nOUT 2 2\n");
  spec.inputs = {InputState::zero(), InputState::plus()};
  spec.seeds = {5, 6};
  auto res = run_experiment(spec);
  CHECK(res.pass);
  CHECK(res.lines.size() == 2);
  CHECK(res.json_report.find("\"runs\"") != std::string::npos);
}

TEST_CASE("resource sweep reports measured numbers beside the formulas") {
  NetworkConfig cfg;
  cfg.n = 7;
  cfg.backend = BackendKind::Frame;
  auto rows = resource_sweep(cfg, Circuit::parse("WIRES 1\nT 1\nOUT 1 1\n"),
                             {InputState::plus()}, {1, 2});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].workspace_formula == 77);
  CHECK(rows[0].sharing_formula == 56);
  CHECK(rows[1].sharing_formula == 224);
  CHECK(rows[0].sharing_sent_max <= rows[0].sharing_formula);
  CHECK(rows[1].sharing_sent_max <= rows[1].sharing_formula);
}
