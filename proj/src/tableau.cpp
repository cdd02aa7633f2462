#include "mpqc/tableau.hpp"

namespace mpqc {

Tableau::Tableau(std::size_t nqubits) : n_(nqubits) {
  xs_.assign(2 * n_, BitVec(n_));
  zs_.assign(2 * n_, BitVec(n_));
  r_.assign(2 * n_, false);
  for (std::size_t i = 0; i < n_; ++i) {
    xs_[i].set(i, true);        // destabilizer X_i
    zs_[n_ + i].set(i, true);   // stabilizer Z_i
  }
}

void Tableau::h(std::size_t q) {
  for (std::size_t i = 0; i < 2 * n_; ++i) {
    const bool x = xs_[i].get(q), z = zs_[i].get(q);
    if (x && z) r_[i] = !r_[i];
    xs_[i].set(q, z);
    zs_[i].set(q, x);
  }
}

void Tableau::p(std::size_t q) {
  for (std::size_t i = 0; i < 2 * n_; ++i) {
    const bool x = xs_[i].get(q), z = zs_[i].get(q);
    if (x && z) r_[i] = !r_[i];
    zs_[i].set(q, z ^ x);
  }
}

void Tableau::pdg(std::size_t q) {
  p(q);
  p(q);
  p(q);
}

void Tableau::x(std::size_t q) {
  for (std::size_t i = 0; i < 2 * n_; ++i)
    if (zs_[i].get(q)) r_[i] = !r_[i];
}

void Tableau::z(std::size_t q) {
  for (std::size_t i = 0; i < 2 * n_; ++i)
    if (xs_[i].get(q)) r_[i] = !r_[i];
}

void Tableau::y(std::size_t q) {
  for (std::size_t i = 0; i < 2 * n_; ++i)
    if (xs_[i].get(q) != zs_[i].get(q)) r_[i] = !r_[i];
}

void Tableau::cnot(std::size_t c, std::size_t t) {
  for (std::size_t i = 0; i < 2 * n_; ++i) {
    const bool xc = xs_[i].get(c), zc = zs_[i].get(c);
    const bool xt = xs_[i].get(t), zt = zs_[i].get(t);
    if (xc && zt && (xt == zc)) r_[i] = !r_[i];
    xs_[i].set(t, xt ^ xc);
    zs_[i].set(c, zc ^ zt);
  }
}

int Tableau::g_exp(bool xi, bool zi, bool xh, bool zh) {
  if (!xi && !zi) return 0;
  if (xi && zi) return (zh ? 1 : 0) - (xh ? 1 : 0);
  if (xi) return zh ? (xh ? 1 : -1) : 0;
  return xh ? (zh ? -1 : 1) : 0;
}

void Tableau::rowsum(std::size_t h, std::size_t i) {
  int total = 2 * (r_[h] ? 1 : 0) + 2 * (r_[i] ? 1 : 0);
  for (std::size_t q = 0; q < n_; ++q)
    total += g_exp(xs_[i].get(q), zs_[i].get(q), xs_[h].get(q), zs_[h].get(q));
  total %= 4;
  if (total < 0) total += 4;
  r_[h] = total == 2;
  xs_[h] ^= xs_[i];
  zs_[h] ^= zs_[i];
}

bool Tableau::anticommutes(std::size_t row, const BitVec& xs, const BitVec& zs) const {
  return (xs_[row].dot(zs) != zs_[row].dot(xs));
}

int Tableau::measure_z(std::size_t q, Rng& rng) {
  BitVec xs(n_), zs(n_);
  zs.set(q, true);
  return do_measure(xs, zs, rng);
}

int Tableau::measure_pauli(const BitVec& xs, const BitVec& zs, Rng& rng) {
  return do_measure(xs, zs, rng);
}

int Tableau::do_measure(const BitVec& xs, const BitVec& zs, Rng& rng) {
  const double u = rng.next_double();  // always one draw
  std::size_t p = 2 * n_;
  for (std::size_t i = n_; i < 2 * n_; ++i)
    if (anticommutes(i, xs, zs)) {
      p = i;
      break;
    }
  if (p < 2 * n_) {
    // random outcome
    for (std::size_t i = 0; i < 2 * n_; ++i)
      if (i != p && anticommutes(i, xs, zs)) rowsum(i, p);
    // destabilizer slot learns the old stabilizer
    xs_[p - n_] = xs_[p];
    zs_[p - n_] = zs_[p];
    r_[p - n_] = r_[p];
    const int outcome = u < 0.5 ? 1 : 0;
    xs_[p] = xs;
    zs_[p] = zs;
    r_[p] = outcome == 1;
    return outcome;
  }
  // deterministic: accumulate the product of stabilizers whose destabilizer
  // partner anticommutes with the observable
  BitVec ax(n_), az(n_);
  int phase = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!anticommutes(i, xs, zs)) continue;
    const std::size_t s = i + n_;
    int total = 2 * (phase ? 1 : 0) + 2 * (r_[s] ? 1 : 0);
    for (std::size_t qq = 0; qq < n_; ++qq)
      total += g_exp(xs_[s].get(qq), zs_[s].get(qq), ax.get(qq), az.get(qq));
    total %= 4;
    if (total < 0) total += 4;
    phase = total == 2;
    ax ^= xs_[s];
    az ^= zs_[s];
  }
  return phase ? 1 : 0;
}

void Tableau::reset_to_zero(std::size_t q, Rng& rng) {
  if (measure_z(q, rng) == 1) x(q);
}

int Tableau::expectation(const BitVec& xs, const BitVec& zs) const {
  for (std::size_t i = n_; i < 2 * n_; ++i)
    if (anticommutes(i, xs, zs)) return 0;
  BitVec ax(n_), az(n_);
  int phase = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!anticommutes(i, xs, zs)) continue;
    const std::size_t s = i + n_;
    int total = 2 * phase + 2 * (r_[s] ? 1 : 0);
    for (std::size_t qq = 0; qq < n_; ++qq)
      total += g_exp(xs_[s].get(qq), zs_[s].get(qq), ax.get(qq), az.get(qq));
    total %= 4;
    if (total < 0) total += 4;
    phase = total == 2;
    ax ^= xs_[s];
    az ^= zs_[s];
  }
  return phase ? -1 : 1;
}

Tableau::Row Tableau::stabilizer(std::size_t i) const { return Row{xs_[n_ + i], zs_[n_ + i], r_[n_ + i]}; }

bool Tableau::check_invariants() const {
  // stabilizers commute pairwise; destabilizer i anticommutes with
  // stabilizer i and commutes with all others; full rank
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const bool anti = xs_[n_ + i].dot(zs_[n_ + j]) != zs_[n_ + i].dot(xs_[n_ + j]);
      if (anti) return false;
      const bool danti = xs_[i].dot(zs_[n_ + j]) != zs_[i].dot(xs_[n_ + j]);
      if (danti != (i == j)) return false;
    }
  BitMatrix m;
  for (std::size_t i = 0; i < 2 * n_; ++i) {
    BitVec row(2 * n_);
    for (std::size_t q = 0; q < n_; ++q) {
      row.set(q, xs_[i].get(q));
      row.set(n_ + q, zs_[i].get(q));
    }
    m.push_back(row);
  }
  return rank_of(m) == 2 * n_;
}

}  // namespace mpqc
