#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpqc/circuit.hpp"
#include "mpqc/rng.hpp"

using namespace mpqc;

TEST_CASE("the seven-node example circuit") {
  auto c = Circuit::parse("WIRES 2\nCNOT 1 2\nOUT 1 1\nOUT 2 2\n");
  CHECK(c.input_wires == 2);
  CHECK(c.total_wires == 2);
  REQUIRE(c.gates().size() == 1);
  CHECK(c.gates()[0].kind == GateKind::CNOT);
  auto st = validate_and_stats(c, 7);
  CHECK(st.t_count == 0);
  CHECK(st.ancilla_count == 0);
  CHECK(st.kappa(7) == 7);
}

TEST_CASE("t and ancilla counting feed kappa") {
  auto c = Circuit::parse("WIRES 1\nT 1\nOUT 1 1\n");
  auto st = validate_and_stats(c, 7);
  CHECK(st.t_count == 1);
  CHECK(st.kappa(7) == 8);

  auto c2 = Circuit::parse("WIRES 2\nANC 3\nANC 4\nCNOT 1 3\nT 2\nCNOT 2 4\nOUT 1 1\nOUT 2 2\n");
  auto st2 = validate_and_stats(c2, 7);
  CHECK(st2.ancilla_count == 2);
  CHECK(st2.t_count == 1);
  CHECK(st2.kappa(7) == 10);
}

TEST_CASE("parse errors carry kind and location") {
  try {
    Circuit::parse("WIRES 1\nCNOT 1 5\n");
    FAIL("expected an error");
  } catch (const CircuitParseError& e) {
    CHECK(e.kind == CircuitParseError::WireOutOfRange);
    CHECK(e.line == 2);
  }
  try {
    Circuit::parse("WIRES 1\nFOO 1\n");
    FAIL("expected an error");
  } catch (const CircuitParseError& e) {
    CHECK(e.kind == CircuitParseError::UnknownGate);
  }
  try {
    Circuit::parse("WIRES 1\nH 2\nANC 2\n");
    FAIL("expected an error");
  } catch (const CircuitParseError& e) {
    CHECK(e.kind == CircuitParseError::UseBeforeDeclare);
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(Circuit::parse("H 1\n"), CircuitParseError);
  CHECK_THROWS_AS(Circuit::parse("WIRES 2\nCNOT 1 1\n"), CircuitParseError);
}

TEST_CASE("print-parse round trip preserves the program") {
  const std::string src =
      "WIRES 3\nH 1\nCNOT 1 2\nANC 4\nT 3\nPDG 2\nCNOT 3 4\nOUT 1 1\nOUT 2 2\nOUT 3 3\n";
  auto c = Circuit::parse(src);
  auto c2 = Circuit::parse(c.print());
  CHECK(c.print() == c2.print());
  CHECK(c.gates().size() == c2.gates().size());
}

TEST_CASE("stats are order-independent recounts of the gate list") {
  // random Cliff+T programs; recount with an independent tally
  Rng gen(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::string src = "WIRES 4\n";
    std::size_t want_t = 0;
    const int gates = 20;
    for (int i = 0; i < gates; ++i) {
      switch (gen.next_below(5)) {
        case 0: src += "H " + std::to_string(1 + gen.next_below(4)) + "\n"; break;
        case 1: src += "P " + std::to_string(1 + gen.next_below(4)) + "\n"; break;
        case 2: {
          std::size_t a = 1 + gen.next_below(4), b = 1 + gen.next_below(4);
          if (a == b) b = a == 4 ? 1 : a + 1;
          src += "CNOT " + std::to_string(a) + " " + std::to_string(b) + "\n";
          break;
        }
        case 3: src += "X " + std::to_string(1 + gen.next_below(4)) + "\n"; break;
        default:
          src += "T " + std::to_string(1 + gen.next_below(4)) + "\n";
          ++want_t;
          break;
      }
    }
    auto c = Circuit::parse(src);
    auto st = validate_and_stats(c, 7);
    CHECK(st.t_count == want_t);
    std::size_t recount = 0;
    for (const auto& g : c.gates())
      if (g.kind == GateKind::T) ++recount;
    CHECK(recount == want_t);
  }
}
