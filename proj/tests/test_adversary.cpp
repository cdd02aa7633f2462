#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpqc/harness.hpp"

using namespace mpqc;

namespace {
NetworkConfig frame_cfg(std::size_t s, std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.n = 7;
  cfg.s = s;
  cfg.seed = seed;
  cfg.backend = BackendKind::Frame;
  cfg.level = 2;
  return cfg;
}
Circuit cnot_circuit() { return Circuit::parse("WIRES 2\nCNOT 1 2\nOUT 1 1\nOUT 2 2\n"); }
}  // namespace

TEST_CASE("honest strategy is a no-op with an empty audit") {
  const CssCode code = CssCode::steane();
  auto adv = make_strategy("honest", {});
  auto result = mpqc_run(frame_cfg(2, 1), code, cnot_circuit(),
                         {InputState::plus(), InputState::zero()}, adv.get());
  CHECK(result.ground_truth.injections.empty());
  CHECK(result.ground_truth.broadcast_lies.empty());
  CHECK(result.final_b.empty());
  auto audit = ground_truth_audit(result.ground_truth, result.final_b, {},
                                  VerdictClass::PassCorrected);
  CHECK(audit.ok);
}

TEST_CASE("pass-class corpus: B stays within the corrupted set across seeds") {
  const CssCode code = CssCode::steane();
  for (const auto& entry : strategy_corpus()) {
    if (entry.expected != VerdictClass::PassCorrected) continue;
    CAPTURE(entry.name);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      std::set<std::size_t> corrupt = entry.cheater_count > 0 ? std::set<std::size_t>{5}
                                                              : std::set<std::size_t>{};
      auto adv = entry.make(corrupt);
      auto result = mpqc_run(frame_cfg(2, 3000 + seed), code, cnot_circuit(),
                             {InputState::one(), InputState::plus()}, adv.get());
      for (auto b : result.final_b) CHECK(corrupt.count(b));
      auto audit = ground_truth_audit(result.ground_truth, result.final_b, corrupt,
                                      entry.expected);
      CHECK(audit.ok);
    }
  }
}

TEST_CASE("bad dealer audit confirms two first-level errors per deal") {
  const CssCode code = CssCode::steane();
  auto adv = make_strategy("bad-dealer-weight-2", {0});
  auto result = mpqc_run(frame_cfg(4, 77), code, cnot_circuit(),
                         {InputState::zero(), InputState::zero()}, adv.get());
  CHECK(result.aborted);
  // two first-level positions recorded for every grid dealt by the cheater
  CHECK(result.ground_truth.dealer_first_level_errors.size() % 2 == 0);
  CHECK(result.ground_truth.dealer_first_level_errors.size() >= 2);
}

TEST_CASE("lie on broadcast is pinned to the liar's position") {
  const CssCode code = CssCode::steane();
  auto adv = make_strategy("lie-on-broadcast", {3});
  RunContext ctx(frame_cfg(2, 88), code, adv.get());
  ctx.net->set_phase(Phase::Sharing);
  ShareGrid* grid = vqss_share(ctx, 0, GridKind::Data, InputState::plus());
  auto res = vqss_verify(ctx, *grid, false);
  CHECK(res.pass);
  // every recorded second-level error position is the liar's
  for (std::size_t j = 0; j < 7; ++j)
    for (auto p : ctx.sets.block_set(0, j)) CHECK(p == 3);
  CHECK_FALSE(ctx.ground_truth.broadcast_lies.empty());
}

TEST_CASE("privacy smoke: corrupted slots carry no input information") {
  auto res = run_scenario("privacy-smoke", 2024, "");
  CHECK(res.pass);
}
