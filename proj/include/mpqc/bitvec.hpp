#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mpqc {

// Word-packed GF(2) vector. All linear algebra in the decoders runs on
// XOR/popcount over these words; verification performs Theta(n * s^2)
// decodes per dealer so this is the hot representation.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static BitVec from_string(const std::string& s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] == '1') v.set(i, true);
    return v;
  }

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ull; }

  void set(std::size_t i, bool b) {
    if (b)
      w_[i >> 6] |= 1ull << (i & 63);
    else
      w_[i >> 6] &= ~(1ull << (i & 63));
  }

  void flip(std::size_t i) { w_[i >> 6] ^= 1ull << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

  std::size_t weight() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }

  // GF(2) inner product.
  bool dot(const BitVec& o) const {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return std::popcount(acc) & 1;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s.push_back(i);
    return s;
  }

  std::string str() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

using BitMatrix = std::vector<BitVec>;

// Row-reduces in place, returns the rank. Column order is left to right.
inline std::size_t row_reduce(BitMatrix& m) {
  if (m.empty()) return 0;
  const std::size_t ncols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && !m[pivot].get(col)) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != rank && m[r].get(col)) m[r] ^= m[rank];
    ++rank;
  }
  m.resize(rank, BitVec(ncols));
  return rank;
}

inline std::size_t rank_of(BitMatrix m) { return row_reduce(m); }

// True if v lies in the row space of basis (basis need not be reduced).
inline bool in_row_space(const BitMatrix& basis, const BitVec& v) {
  BitMatrix m = basis;
  m.push_back(v);
  return rank_of(m) == rank_of(basis);
}

inline bool row_space_contains(const BitMatrix& big, const BitMatrix& small) {
  for (const auto& r : small)
    if (!in_row_space(big, r)) return false;
  return true;
}

inline bool same_row_space(const BitMatrix& a, const BitMatrix& b) {
  return row_space_contains(a, b) && row_space_contains(b, a);
}

// Basis of the null space {x : m x^T = 0}.
inline BitMatrix null_space(const BitMatrix& m, std::size_t ncols) {
  BitMatrix red = m;
  row_reduce(red);
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(ncols, false);
  for (const auto& row : red) {
    for (std::size_t c = 0; c < ncols; ++c)
      if (row.get(c)) {
        pivot_col.push_back(c);
        is_pivot[c] = true;
        break;
      }
  }
  BitMatrix basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    BitVec v(ncols);
    v.set(free, true);
    for (std::size_t r = 0; r < red.size(); ++r)
      if (red[r].get(free)) v.set(pivot_col[r], true);
    basis.push_back(v);
  }
  return basis;
}

}  // namespace mpqc
