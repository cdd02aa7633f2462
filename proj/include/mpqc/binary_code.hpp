#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mpqc/bitvec.hpp"

namespace mpqc {

struct AmbiguousErasure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CodeFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DecodeStatus { Corrected, DetectedUncorrectable };

struct DecodeResult {
  BitVec codeword;
  std::vector<std::size_t> error_positions;
  DecodeStatus status = DecodeStatus::Corrected;
  bool ok() const { return status == DecodeStatus::Corrected; }
};

// Classical [n,k,d] binary linear code. Immutable after construction,
// decoding is pure; instances are shared freely across protocol runs.
class BinaryCode {
 public:
  // Builds from a generator matrix; derives H as a null-space basis and
  // computes the distance exhaustively (codes here are small).
  static BinaryCode from_generator(std::size_t n, BitMatrix gen,
                                   std::optional<std::size_t> declared_dist = {});

  // The [7,4,3] Hamming code with the lexicographic parity check
  // (column j of H is j written in binary, j = 1..7).
  static BinaryCode hamming7();

  static BinaryCode full_space(std::size_t n);
  static BinaryCode repetition(std::size_t n);

  // Text format: first line "n k d", then k generator rows as 0/1 strings.
  static BinaryCode parse(const std::string& text);
  static BinaryCode load(const std::string& path);
  std::string print() const;

  std::size_t length() const { return n_; }
  std::size_t dim() const { return k_; }
  std::size_t distance() const { return dist_; }
  // Max number of correctable errors for bounded-distance decoding.
  std::size_t t() const { return dist_ == 0 ? 0 : (dist_ - 1) / 2; }

  const BitMatrix& generator() const { return gen_; }
  const BitMatrix& parity_check() const { return chk_; }

  BinaryCode dual() const;

  BitVec encode(const BitVec& message) const;
  bool is_codeword(const BitVec& word) const;
  BitVec syndrome(const BitVec& word) const;

  // Bounded-distance decoding: corrects up to t() errors, anything further
  // is reported as DetectedUncorrectable rather than guessed at.
  DecodeResult syndrome_decode(const BitVec& word) const;

  // Error pattern of weight <= t with the given syndrome, if one exists.
  std::optional<BitVec> error_for_syndrome(const BitVec& synd) const;

  // Recovers the unique codeword agreeing with all unerased positions.
  // Throws AmbiguousErasure when more than one codeword fits.
  DecodeResult erasure_decode(const BitVec& word, const std::vector<bool>& erased) const;

  // Enumerates all 2^k codewords (fine for the n <= 16 codes used here).
  std::vector<BitVec> all_codewords() const;

  BinaryCode() = default;  // empty code; fill via the factories

 private:
  void build_syndrome_table();
  std::uint64_t syndrome_key(const BitVec& s) const;

  std::size_t n_ = 0, k_ = 0, dist_ = 0;
  BitMatrix gen_;  // k x n
  BitMatrix chk_;  // (n-k) x n
  std::unordered_map<std::uint64_t, BitVec> syndrome_table_;
};

// Result of the two-level classical decode used throughout verification:
// each of the n blocks is decoded to a bit, then the bit string is decoded
// once more as a word of the code.
struct DoubleDecodeResult {
  int value = 0;
  // error positions inside block j (second-level errors)
  std::vector<std::vector<std::size_t>> block_errors;
  std::vector<std::size_t> first_level_errors;
  std::vector<std::size_t> uncorrectable_blocks;  // level-2 decode failures
  bool first_level_ok = true;
  bool clean() const {
    if (!first_level_ok || !uncorrectable_blocks.empty() || !first_level_errors.empty())
      return false;
    for (const auto& b : block_errors)
      if (!b.empty()) return false;
    return true;
  }
};

// `functional` maps a codeword to its encoded bit (for a CSS code this is
// the logical-Z support for standard-basis words).
DoubleDecodeResult double_decode(const BinaryCode& code, const std::vector<BitVec>& block_words,
                                 const BitVec& functional);

// Single-level variant used by level-1 protocol runs.
struct SingleDecodeResult {
  int value = 0;
  std::vector<std::size_t> error_positions;
  bool ok = true;
};
SingleDecodeResult single_decode(const BinaryCode& code, const BitVec& word,
                                 const BitVec& functional);

}  // namespace mpqc
