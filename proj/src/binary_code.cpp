#include "mpqc/binary_code.hpp"

#include <fstream>
#include <sstream>

namespace mpqc {

namespace {

std::size_t min_nonzero_weight(const BitMatrix& gen, std::size_t n) {
  if (gen.empty()) return 0;
  const std::size_t k = gen.size();
  std::size_t best = n + 1;
  for (std::uint64_t m = 1; m < (1ull << k); ++m) {
    BitVec w(n);
    for (std::size_t i = 0; i < k; ++i)
      if ((m >> i) & 1) w ^= gen[i];
    best = std::min(best, w.weight());
  }
  return best == n + 1 ? 0 : best;
}

}  // namespace

BinaryCode BinaryCode::from_generator(std::size_t n, BitMatrix gen,
                                      std::optional<std::size_t> declared_dist) {
  BinaryCode c;
  c.n_ = n;
  row_reduce(gen);
  c.k_ = gen.size();
  c.gen_ = std::move(gen);
  c.chk_ = null_space(c.gen_, n);
  if (c.k_ > 20) throw CodeFormatError("code dimension too large for exhaustive machinery");
  const std::size_t computed = min_nonzero_weight(c.gen_, n);
  if (declared_dist) {
    if (n <= 16 && computed != *declared_dist)
      throw CodeFormatError("declared distance " + std::to_string(*declared_dist) +
                            " does not match computed " + std::to_string(computed));
    c.dist_ = *declared_dist;
  } else {
    c.dist_ = computed;
  }
  c.build_syndrome_table();
  return c;
}

BinaryCode BinaryCode::hamming7() {
  // Parity-check columns 1..7 in binary.
  BitMatrix h;
  for (int bit = 0; bit < 3; ++bit) {
    BitVec row(7);
    for (int col = 1; col <= 7; ++col)
      if ((col >> bit) & 1) row.set(col - 1, true);
    h.push_back(row);
  }
  BitMatrix gen = null_space(h, 7);
  return from_generator(7, std::move(gen), 3);
}

BinaryCode BinaryCode::full_space(std::size_t n) {
  BitMatrix gen;
  for (std::size_t i = 0; i < n; ++i) {
    BitVec row(n);
    row.set(i, true);
    gen.push_back(row);
  }
  return from_generator(n, std::move(gen), 1);
}

BinaryCode BinaryCode::repetition(std::size_t n) {
  BitVec row(n);
  for (std::size_t i = 0; i < n; ++i) row.set(i, true);
  return from_generator(n, {row}, n);
}

BinaryCode BinaryCode::parse(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0, k = 0, d = 0;
  if (!(in >> n >> k >> d)) throw CodeFormatError("expected header line: n k d");
  BitMatrix gen;
  std::string row;
  while (gen.size() < k && in >> row) {
    if (row.size() != n) throw CodeFormatError("generator row has wrong length: " + row);
    for (char c : row)
      if (c != '0' && c != '1') throw CodeFormatError("generator rows must be 0/1 strings");
    gen.push_back(BitVec::from_string(row));
  }
  if (gen.size() != k) throw CodeFormatError("expected " + std::to_string(k) + " generator rows");
  BinaryCode c = from_generator(n, std::move(gen), d);
  if (c.dim() != k) throw CodeFormatError("generator rows are not independent");
  return c;
}

BinaryCode BinaryCode::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CodeFormatError("cannot open code file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string BinaryCode::print() const {
  std::ostringstream out;
  out << n_ << ' ' << k_ << ' ' << dist_ << '\n';
  for (const auto& row : gen_) out << row.str() << '\n';
  return out.str();
}

BinaryCode BinaryCode::dual() const {
  BinaryCode d;
  d.n_ = n_;
  d.gen_ = chk_;
  row_reduce(d.gen_);
  d.k_ = d.gen_.size();
  d.chk_ = gen_;
  d.dist_ = min_nonzero_weight(d.gen_, n_);
  d.build_syndrome_table();
  return d;
}

BitVec BinaryCode::encode(const BitVec& message) const {
  BitVec w(n_);
  for (std::size_t i = 0; i < k_; ++i)
    if (message.get(i)) w ^= gen_[i];
  return w;
}

BitVec BinaryCode::syndrome(const BitVec& word) const {
  BitVec s(chk_.size());
  for (std::size_t r = 0; r < chk_.size(); ++r) s.set(r, chk_[r].dot(word));
  return s;
}

bool BinaryCode::is_codeword(const BitVec& word) const { return !syndrome(word).any(); }

std::uint64_t BinaryCode::syndrome_key(const BitVec& s) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.get(i)) key |= 1ull << i;
  return key;
}

void BinaryCode::build_syndrome_table() {
  syndrome_table_.clear();
  if (n_ > 15 || chk_.empty()) return;
  // All error patterns of weight <= t, lowest weight wins.
  BitVec zero(n_);
  syndrome_table_[0] = zero;
  for (std::size_t w = 1; w <= t(); ++w) {
    // enumerate all weight-w patterns directly
    std::vector<std::size_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      BitVec e(n_);
      for (auto i : idx) e.set(i, true);
      std::uint64_t key = syndrome_key(syndrome(e));
      syndrome_table_.try_emplace(key, e);
      // next combination
      std::size_t pos = w;
      while (pos > 0) {
        --pos;
        if (idx[pos] != n_ - w + pos) break;
      }
      if (idx[pos] == n_ - w + pos) break;
      ++idx[pos];
      for (std::size_t j = pos + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

std::optional<BitVec> BinaryCode::error_for_syndrome(const BitVec& s) const {
  if (!s.any()) return BitVec(n_);
  if (!syndrome_table_.empty()) {
    auto it = syndrome_table_.find(syndrome_key(s));
    if (it != syndrome_table_.end()) return it->second;
    return std::nullopt;
  }
  // Larger codes: search error patterns of weight <= t directly; t is tiny
  // for every code in use.
  for (std::size_t w = 1; w <= t(); ++w) {
    std::vector<std::size_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      BitVec e(n_);
      for (auto i : idx) e.set(i, true);
      if (syndrome(e) == s) return e;
      std::size_t pos = w;
      while (pos > 0) {
        --pos;
        if (idx[pos] != n_ - w + pos) break;
      }
      if (idx[pos] == n_ - w + pos) break;
      ++idx[pos];
      for (std::size_t j = pos + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return std::nullopt;
}

DecodeResult BinaryCode::syndrome_decode(const BitVec& word) const {
  DecodeResult r;
  if (chk_.empty()) {  // full space: every word is a codeword
    r.codeword = word;
    return r;
  }
  BitVec s = syndrome(word);
  if (!s.any()) {
    r.codeword = word;
    return r;
  }
  auto err = error_for_syndrome(s);
  if (!err) {
    r.codeword = word;
    r.status = DecodeStatus::DetectedUncorrectable;
    return r;
  }
  r.codeword = word ^ *err;
  r.error_positions = err->support();
  return r;
}

DecodeResult BinaryCode::erasure_decode(const BitVec& word, const std::vector<bool>& erased) const {
  // Solve m * G = word on the unerased columns.
  DecodeResult r;
  if (erased.size() != n_) throw AmbiguousErasure("erasure mask length mismatch");
  BitMatrix sys;  // rows: [G column | observed bit] transposed into k+1 wide rows
  for (std::size_t col = 0; col < n_; ++col) {
    if (erased[col]) continue;
    BitVec row(k_ + 1);
    for (std::size_t i = 0; i < k_; ++i) row.set(i, gen_[i].get(col));
    row.set(k_, word.get(col));
    sys.push_back(row);
  }
  row_reduce(sys);
  BitVec msg(k_);
  std::vector<bool> pinned(k_, false);
  for (const auto& row : sys) {
    std::size_t lead = k_ + 1;
    for (std::size_t c = 0; c < k_ + 1; ++c)
      if (row.get(c)) {
        lead = c;
        break;
      }
    if (lead == k_) {
      // 0 = 1: unerased bits are not consistent with any codeword
      r.codeword = word;
      r.status = DecodeStatus::DetectedUncorrectable;
      return r;
    }
    if (lead < k_) {
      pinned[lead] = true;
      msg.set(lead, row.get(k_));  // RREF: row is [e_lead | value]
    }
  }
  for (std::size_t i = 0; i < k_; ++i)
    if (!pinned[i])
      throw AmbiguousErasure("more than one codeword matches the unerased positions");
  r.codeword = encode(msg);
  for (std::size_t i = 0; i < n_; ++i)
    if (erased[i] && r.codeword.get(i) != word.get(i)) r.error_positions.push_back(i);
  return r;
}

std::vector<BitVec> BinaryCode::all_codewords() const {
  std::vector<BitVec> out;
  out.reserve(1ull << k_);
  for (std::uint64_t m = 0; m < (1ull << k_); ++m) {
    BitVec w(n_);
    for (std::size_t i = 0; i < k_; ++i)
      if ((m >> i) & 1) w ^= gen_[i];
    out.push_back(w);
  }
  return out;
}

DoubleDecodeResult double_decode(const BinaryCode& code, const std::vector<BitVec>& block_words,
                                 const BitVec& functional) {
  const std::size_t n = code.length();
  DoubleDecodeResult out;
  out.block_errors.resize(n);
  BitVec bits(n);
  for (std::size_t j = 0; j < n; ++j) {
    DecodeResult r = code.syndrome_decode(block_words[j]);
    if (!r.ok()) {
      out.uncorrectable_blocks.push_back(j);
      bits.set(j, functional.dot(block_words[j]));
      continue;
    }
    out.block_errors[j] = r.error_positions;
    bits.set(j, functional.dot(r.codeword));
  }
  DecodeResult first = code.syndrome_decode(bits);
  if (!first.ok()) {
    out.first_level_ok = false;
    out.value = functional.dot(bits);
    return out;
  }
  out.first_level_errors = first.error_positions;
  out.value = functional.dot(first.codeword);
  return out;
}

SingleDecodeResult single_decode(const BinaryCode& code, const BitVec& word,
                                 const BitVec& functional) {
  SingleDecodeResult out;
  DecodeResult r = code.syndrome_decode(word);
  if (!r.ok()) {
    out.ok = false;
    out.value = functional.dot(word);
    return out;
  }
  out.error_positions = r.error_positions;
  out.value = functional.dot(r.codeword);
  return out;
}

}  // namespace mpqc
