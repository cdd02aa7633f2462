#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpqc/frame.hpp"
#include "mpqc/harness.hpp"
#include "mpqc/tableau.hpp"

using namespace mpqc;

TEST_CASE("single-qubit gates") {
  StateVector sv(1);
  sv.h(0);
  CHECK(std::abs(sv.amplitudes()[0] - cplx(kInvSqrt2)) < 1e-15);
  CHECK(std::abs(sv.amplitudes()[1] - cplx(kInvSqrt2)) < 1e-15);
  Rng rng(1);
  StateVector one(1);
  one.x(0);
  CHECK(one.measure_z(0, rng) == 1);
}

TEST_CASE("fidelity spec examples") {
  StateVector zero(1), one(1), plus(1);
  one.x(0);
  plus.h(0);
  CHECK(StateVector::fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(StateVector::fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(StateVector::fidelity(zero, plus) == doctest::Approx(0.5));
}

TEST_CASE("capacity is enforced at construction") {
  CHECK_THROWS_AS(StateVector(23), CapacityError);
  StateVector a(12), b(12);
  CHECK_THROWS_AS(a.merge(b), CapacityError);
}

TEST_CASE("norm is preserved across a 1000-gate sequence") {
  Rng gen(42);
  StateVector sv(8);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t q = gen.next_below(8);
    switch (gen.next_below(6)) {
      case 0: sv.h(q); break;
      case 1: sv.p(q); break;
      case 2: sv.t(q); break;
      case 3: sv.x(q); break;
      case 4: sv.g(q); break;
      default: sv.cnot(q, (q + 1) % 8); break;
    }
  }
  CHECK(std::abs(sv.norm_sq() - 1.0) < 1e-12);
}

TEST_CASE("production kernels match the serial reference") {
  Rng gen(7);
  std::vector<std::array<cplx, 2>> init;
  for (int q = 0; q < 10; ++q) {
    auto psi = haar_state(gen);
    init.push_back({psi[0], psi[1]});
  }
  StateVector par = StateVector::product(init);
  std::vector<cplx> ref = par.amplitudes();
  for (int i = 0; i < 60; ++i) {
    const std::size_t q = gen.next_below(10);
    const std::size_t t = (q + 1 + gen.next_below(9)) % 10;
    const Mat2* m = nullptr;
    switch (gen.next_below(4)) {
      case 0: m = &kMatH; break;
      case 1: m = &kMatP; break;
      case 2: m = &kMatT; break;
      default: m = nullptr; break;
    }
    if (m) {
      par.apply1(q, *m);
      reference::apply1(ref, q, *m);
    } else {
      par.apply_controlled(q, t, kMatX);
      reference::apply_controlled(ref, q, t, kMatX);
    }
  }
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(par.amplitudes()[i] == ref[i]);
  CHECK(std::abs(reference::prob_one(ref, 3) - par.prob_one(3)) < 1e-12);
}

TEST_CASE("serial and parallel kernel modes agree bit for bit") {
  auto run = [](KernelMode mode) {
    StateVector::set_kernel_mode(mode);
    StateVector sv(15);  // above the parallel threshold
    Rng gen(99);
    for (int i = 0; i < 40; ++i) {
      const std::size_t q = gen.next_below(15);
      if (gen.next_bit())
        sv.h(q);
      else
        sv.cnot(q, (q + 3) % 15);
    }
    StateVector::set_kernel_mode(KernelMode::Parallel);
    return sv;
  };
  StateVector a = run(KernelMode::Serial);
  StateVector b = run(KernelMode::Parallel);
  CHECK(StateVector::max_amp_diff(a, b) == 0.0);
}

TEST_CASE("parity measurement on a bell pair") {
  StateVector sv(2);
  sv.h(0);
  sv.cnot(0, 1);
  Rng rng(3);
  CHECK(sv.measure_z_parity({0, 1}, rng) == 0);
}

TEST_CASE("tableau cnot maps the stabilizer group correctly") {
  Tableau tab(2);  // starts as <Z1, Z2>
  tab.cnot(0, 1);
  // stabilizers should now generate <Z1, Z1 Z2>
  auto s0 = tab.stabilizer(0);
  auto s1 = tab.stabilizer(1);
  CHECK_FALSE(s0.x.any());
  CHECK_FALSE(s1.x.any());
  BitMatrix got{s0.z, s1.z};
  BitMatrix want{BitVec::from_string("10"), BitVec::from_string("11")};
  CHECK(same_row_space(got, want));
  CHECK(tab.check_invariants());
}

TEST_CASE("tableau plus-state measurement is a fair coin") {
  std::size_t ones = 0;
  for (int i = 0; i < 1000; ++i) {
    Tableau tab(1);
    tab.h(0);
    Rng rng(derive_stream(1234, "coin", i));
    ones += tab.measure_z(0, rng);
  }
  const double freq = ones / 1000.0;
  CHECK(freq > 0.45);
  CHECK(freq < 0.55);
}

TEST_CASE("tableau deterministic outcomes and expectation") {
  Tableau tab(2);
  tab.h(0);
  tab.cnot(0, 1);
  // ZZ and XX are stabilizers of the bell pair
  CHECK(tab.expectation(BitVec::from_string("00"), BitVec::from_string("11")) == 1);
  CHECK(tab.expectation(BitVec::from_string("11"), BitVec::from_string("00")) == 1);
  CHECK(tab.expectation(BitVec::from_string("00"), BitVec::from_string("10")) == 0);
  Rng rng(8);
  const int m0 = tab.measure_z(0, rng);
  const int m1 = tab.measure_z(1, rng);
  CHECK(m0 == m1);  // correlated outcomes
}

TEST_CASE("G phase convention") {
  // G|m> = |m> with eigenvalue exactly +1, G^2 = identity
  const Mat2 g = cxp_dagger_phase_convention();
  const cplx m0(kInvSqrt2), m1 = kEipi4 * kInvSqrt2;
  const cplx r0 = g[0] * m0 + g[1] * m1;
  const cplx r1 = g[2] * m0 + g[3] * m1;
  CHECK(std::abs(r0 - m0) < 1e-12);
  CHECK(std::abs(r1 - m1) < 1e-12);
  StateVector sv(1);
  sv.h(0);
  sv.t(0);  // |m>
  StateVector before = sv;
  sv.g(0);
  sv.g(0);
  CHECK(StateVector::fidelity(sv, before) >= 1.0 - 1e-12);
  CHECK(vmagic_stabilization_infidelity() <= 1e-12);
}

TEST_CASE("frame backend basics") {
  const CssCode code = CssCode::steane();

  SUBCASE("logical X with a Z frame leaves the frame alone") {
    FrameBackend fb(code, 1, 77);
    const int g = fb.new_wire_grid({cplx(1.0), cplx(0.0)});
    fb.inject(g, 3, Pauli::Z);
    fb.logical_x(g);
    CHECK(fb.frame_at(g, 3) == Pauli::Z);
    // the wire now holds |1>
    CHECK(fb.logical_register().prob_one(fb.wire_index(g)) == doctest::Approx(1.0));
  }

  SUBCASE("frame X flips the measured codeword bit and the decoder sees it") {
    FrameBackend fb(code, 1, 78);
    const int g = fb.new_zero_grid();
    fb.inject(g, 2, Pauli::X);
    BitVec word = fb.measure_grid(g, false);
    // word xor e_2 is a V-codeword encoding 0
    BitVec fixed = word;
    fixed.flip(2);
    CHECK(code.v().is_codeword(fixed));
    CHECK_FALSE(code.logical_z().dot(fixed));
    auto dec = single_decode(code.v(), word, code.logical_z());
    REQUIRE(dec.error_positions.size() == 1);
    CHECK(dec.error_positions[0] == 2);
    CHECK(dec.value == 0);
  }

  SUBCASE("two-level measurement is a valid double encoding") {
    FrameBackend fb(code, 2, 79);
    const int g = fb.new_classical_grid({false, 1}, {true, 0});  // logical |1>
    BitVec word = fb.measure_grid(g, false);
    std::vector<BitVec> blocks(7, BitVec(7));
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t l = 0; l < 7; ++l) blocks[j].set(l, word.get(j * 7 + l));
    auto dd = double_decode(code.v(), blocks, code.logical_z());
    CHECK(dd.value == 1);
    CHECK(dd.clean());
  }

  SUBCASE("C-G rejects X-component frames") {
    FrameBackend fb(code, 1, 80);
    const int zg = fb.new_zero_grid();
    const int mg = fb.new_wire_grid({cplx(kInvSqrt2), kEipi4 * kInvSqrt2});
    fb.promote_to_wire(zg);
    fb.inject(zg, 1, Pauli::X);
    fb.transversal_h(zg);  // X frame becomes Z: fine so far
    fb.inject(mg, 2, Pauli::X);
    CHECK_THROWS_AS(fb.transversal_cg(zg, mg), UnsupportedFramePropagation);
  }
}

TEST_CASE("cross validation: tableau vs statevector on random clifford circuits") {
  auto rep = cross_validate_clifford(100, 12, 20250808);
  CHECK(rep.cases == 100);
  CHECK(rep.divergences == 0);
}

TEST_CASE("cross validation: frame vs statevector single-level vqss transcripts") {
  auto rep = cross_validate_vqss(10, 4242);
  CHECK(rep.cases == 10);
  CHECK(rep.divergences == 0);
}
