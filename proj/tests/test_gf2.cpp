#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>

#include "mpqc/binary_code.hpp"

using namespace mpqc;

namespace {

// Independent brute-force nearest-codeword decoder used as the oracle for
// syndrome_decode. Returns nullopt on a tie beyond distance t.
std::optional<BitVec> brute_nearest(const BinaryCode& code, const BitVec& word,
                                    std::size_t max_dist) {
  std::optional<BitVec> best;
  std::size_t best_d = code.length() + 1;
  for (const auto& c : code.all_codewords()) {
    std::size_t d = (c ^ word).weight();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_d > max_dist) return std::nullopt;
  return best;
}

BitVec ones(std::size_t n) {
  BitVec v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, true);
  return v;
}

}  // namespace

TEST_CASE("hamming7 shape and built-in validation") {
  auto h = BinaryCode::hamming7();
  CHECK(h.length() == 7);
  CHECK(h.dim() == 4);
  CHECK(h.distance() == 3);
  CHECK(h.t() == 1);
  CHECK(rank_of(h.generator()) == 4);
  CHECK(rank_of(h.parity_check()) == 3);
  // G H^T = 0
  for (const auto& g : h.generator())
    for (const auto& p : h.parity_check()) CHECK_FALSE(g.dot(p));
}

TEST_CASE("dual of hamming is the simplex code and is contained in hamming") {
  auto h = BinaryCode::hamming7();
  auto d = h.dual();
  CHECK(d.length() == 7);
  CHECK(d.dim() == 3);
  CHECK(d.distance() == 4);
  // every nonzero simplex codeword has weight 4 (2^3 enumeration)
  for (const auto& c : d.all_codewords())
    if (c.any()) CHECK(c.weight() == 4);
  // containment: dual(V) subset of V, the CSS precondition with V = W
  CHECK(row_space_contains(h.generator(), d.generator()));
  // dual(dual(c)) = c up to row space
  CHECK(same_row_space(d.dual().generator(), h.generator()));
}

TEST_CASE("dual of repetition is the even-weight code") {
  auto rep = BinaryCode::repetition(3);
  auto d = rep.dual();
  CHECK(d.dim() == 2);
  CHECK(d.distance() == 2);
  for (const auto& c : d.all_codewords()) CHECK(c.weight() % 2 == 0);
}

TEST_CASE("dual of the full space is the zero code") {
  auto full = BinaryCode::full_space(5);
  auto d = full.dual();
  CHECK(d.dim() == 0);
  CHECK(d.all_codewords().size() == 1);
}

TEST_CASE("syndrome decode spec examples") {
  auto h = BinaryCode::hamming7();

  auto r0 = h.syndrome_decode(BitVec(7));
  CHECK(r0.ok());
  CHECK(r0.error_positions.empty());

  auto r1 = h.syndrome_decode(BitVec::from_string("0100000"));
  CHECK(r1.ok());
  CHECK(r1.codeword == BitVec(7));
  REQUIRE(r1.error_positions.size() == 1);
  CHECK(r1.error_positions[0] == 1);

  // weight-2 error: bounded-distance decoding still lands on some valid
  // codeword within distance 1 of the input (Hamming is perfect)
  BitVec w2 = BitVec::from_string("1100000");
  auto r2 = h.syndrome_decode(w2);
  CHECK(r2.ok());
  CHECK(h.is_codeword(r2.codeword));
  CHECK((r2.codeword ^ w2).weight() <= 1);
  CHECK(r2.codeword != BitVec(7));
}

TEST_CASE("syndrome decode agrees with brute-force oracle on all single flips") {
  auto h = BinaryCode::hamming7();
  for (const auto& c : h.all_codewords()) {
    for (std::size_t p = 0; p < 7; ++p) {
      BitVec w = c;
      w.flip(p);
      auto oracle = brute_nearest(h, w, 1);
      REQUIRE(oracle.has_value());
      auto got = h.syndrome_decode(w);
      CHECK(got.ok());
      CHECK(got.codeword == *oracle);
      REQUIRE(got.error_positions.size() == 1);
      CHECK(got.error_positions[0] == p);
    }
    auto clean = h.syndrome_decode(c);
    CHECK(clean.ok());
    CHECK(clean.codeword == c);
    CHECK(clean.error_positions.empty());
  }
}

TEST_CASE("erasure decode recovers codewords") {
  auto h = BinaryCode::hamming7();
  BitVec cw = BitVec::from_string("1010101");
  REQUIRE(h.is_codeword(cw));

  SUBCASE("two erased positions") {
    BitVec w = cw;
    w.set(0, false);
    w.set(1, false);
    std::vector<bool> erased{true, true, false, false, false, false, false};
    auto r = h.erasure_decode(w, erased);
    CHECK(r.ok());
    CHECK(r.codeword == cw);
  }

  SUBCASE("no erasures is the identity on codewords") {
    std::vector<bool> erased(7, false);
    for (const auto& c : h.all_codewords()) {
      auto r = h.erasure_decode(c, erased);
      CHECK(r.ok());
      CHECK(r.codeword == c);
    }
  }

  SUBCASE("identity for every erasure pattern up to d-1") {
    for (std::size_t a = 0; a < 7; ++a)
      for (std::size_t b = a; b < 7; ++b) {
        std::vector<bool> erased(7, false);
        erased[a] = erased[b] = true;
        for (const auto& c : h.all_codewords()) {
          auto r = h.erasure_decode(c, erased);
          CHECK(r.ok());
          CHECK(r.codeword == c);
        }
      }
  }

  SUBCASE("three erasures covering a weight-3 codeword are ambiguous") {
    // brute force: find a weight-3 codeword; erasing its support leaves the
    // zero word compatible with two codewords
    BitVec c3(7);
    bool found = false;
    for (const auto& c : h.all_codewords())
      if (c.weight() == 3) {
        c3 = c;
        found = true;
        break;
      }
    REQUIRE(found);
    std::vector<bool> erased(7, false);
    for (auto p : c3.support()) erased[p] = true;
    CHECK_THROWS_AS(h.erasure_decode(BitVec(7), erased), AmbiguousErasure);
  }
}

TEST_CASE("double decode") {
  auto h = BinaryCode::hamming7();
  BitVec functional = ones(7);  // logical bit of a codeword = overall parity

  SUBCASE("all-zero blocks give value 0 with no errors") {
    std::vector<BitVec> blocks(7, BitVec(7));
    auto r = double_decode(h, blocks, functional);
    CHECK(r.value == 0);
    CHECK(r.clean());
  }

  SUBCASE("encode twice of b returns b, clean") {
    BitVec one_cw = ones(7);  // encodes 1: odd parity, and 1111111 is a codeword
    REQUIRE(h.is_codeword(one_cw));
    for (int b : {0, 1}) {
      std::vector<BitVec> blocks;
      for (std::size_t j = 0; j < 7; ++j) blocks.push_back(b ? one_cw : BitVec(7));
      auto r = double_decode(h, blocks, functional);
      CHECK(r.value == b);
      CHECK(r.clean());
    }
  }

  SUBCASE("single flipped bit in block 3 is a second-level error") {
    BitVec one_cw = ones(7);
    std::vector<BitVec> blocks(7, one_cw);
    blocks[2].flip(4);
    auto r = double_decode(h, blocks, functional);
    CHECK(r.value == 1);
    CHECK(r.first_level_errors.empty());
    REQUIRE(r.block_errors[2].size() == 1);
    CHECK(r.block_errors[2][0] == 4);
    for (std::size_t j = 0; j < 7; ++j)
      if (j != 2) CHECK(r.block_errors[j].empty());
  }

  SUBCASE("block decoding to the wrong bit is a first-level error") {
    // two flips in block 4 pull its decode to a different codeword, whose
    // parity differs (codewords differ by weight >= 3)
    BitVec one_cw = ones(7);
    std::vector<BitVec> blocks(7, one_cw);
    blocks[4].flip(0);
    blocks[4].flip(1);
    auto check = h.syndrome_decode(blocks[4]);
    REQUIRE(check.ok());
    REQUIRE(functional.dot(check.codeword) == 0);  // wrong bit, by brute-force oracle
    auto r = double_decode(h, blocks, functional);
    CHECK(r.value == 1);
    REQUIRE(r.first_level_errors.size() == 1);
    CHECK(r.first_level_errors[0] == 4);
  }
}

TEST_CASE("code file format round trip") {
  auto h = BinaryCode::hamming7();
  auto parsed = BinaryCode::parse(h.print());
  CHECK(parsed.length() == 7);
  CHECK(parsed.dim() == 4);
  CHECK(parsed.distance() == 3);
  CHECK(same_row_space(parsed.generator(), h.generator()));

  CHECK_THROWS_AS(BinaryCode::parse("7 4"), CodeFormatError);
  CHECK_THROWS_AS(BinaryCode::parse("7 1 3\n1100000x"), CodeFormatError);
  // declared distance is validated exhaustively for n <= 16
  CHECK_THROWS_AS(BinaryCode::parse("3 1 2\n111"), CodeFormatError);
}
