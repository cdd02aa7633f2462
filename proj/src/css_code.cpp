#include "mpqc/css_code.hpp"

#include <algorithm>

namespace mpqc {

namespace {

// Minimum-weight element of coset rep + span(basis), brute force over the
// span (codes here have tiny stabilizer groups).
BitVec min_weight_in_coset(const BitVec& rep, const BitMatrix& basis) {
  BitVec best = rep;
  const std::size_t k = basis.size();
  for (std::uint64_t m = 0; m < (1ull << k); ++m) {
    BitVec v = rep;
    for (std::size_t i = 0; i < k; ++i)
      if ((m >> i) & 1) v ^= basis[i];
    if (v.weight() < best.weight()) best = v;
  }
  return best;
}

// Smallest weight among codewords of `code` outside the row space of `sub`.
std::size_t min_weight_outside(const BinaryCode& code, const BitMatrix& sub, std::size_t n) {
  std::size_t best = n + 1;
  for (const auto& c : code.all_codewords()) {
    if (!c.any() || in_row_space(sub, c)) continue;
    best = std::min(best, c.weight());
  }
  return best == n + 1 ? 0 : best;
}

}  // namespace

CssCode CssCode::build(BinaryCode v, BinaryCode w) {
  if (v.length() != w.length())
    throw DualContainmentViolated("V and W must have the same length");
  const std::size_t n = v.length();
  // V* subset of W: the rows of H_V must be codewords of W.
  for (const auto& row : v.parity_check())
    if (!w.is_codeword(row))
      throw DualContainmentViolated("dual of V is not contained in W");

  CssCode c;
  c.n_ = n;
  c.v_ = std::move(v);
  c.w_ = std::move(w);
  c.z_stab_ = c.v_.parity_check();  // generate V*
  c.x_stab_ = c.w_.parity_check();  // generate W*
  row_reduce(c.z_stab_);
  row_reduce(c.x_stab_);
  c.k_logical_ = c.v_.dim() + c.w_.dim() - n;

  // Logical X: a codeword of V outside W*, minimum-weight representative.
  BitVec raw_x;
  bool got_x = false;
  for (const auto& cw : c.v_.all_codewords())
    if (cw.any() && !in_row_space(c.x_stab_, cw)) {
      raw_x = cw;
      got_x = true;
      break;
    }
  BitVec raw_z;
  bool got_z = false;
  for (const auto& cw : c.w_.all_codewords()) {
    if (!cw.any() || in_row_space(c.z_stab_, cw)) continue;
    if (got_x && !cw.dot(raw_x)) continue;  // need anticommuting pair
    raw_z = cw;
    got_z = true;
    break;
  }
  if (got_x && got_z) {
    c.log_x_ = min_weight_in_coset(raw_x, c.x_stab_);
    c.log_z_ = min_weight_in_coset(raw_z, c.z_stab_);
  } else {
    c.log_x_ = BitVec(n);
    c.log_z_ = BitVec(n);
  }

  // CSS distance: lightest codeword of V outside W* or of W outside V*.
  const std::size_t dx = min_weight_outside(c.v_, c.x_stab_, n);
  const std::size_t dz = min_weight_outside(c.w_, c.z_stab_, n);
  c.d_ = (dx && dz) ? std::min(dx, dz) : std::max(dx, dz);
  if (c.d_ == 0) c.d_ = 1;

  c.run_checker();
  c.synthesize_encoding();
  return c;
}

CssCode CssCode::steane() {
  auto h = BinaryCode::hamming7();
  return build(h, h);
}

void CssCode::run_checker() {
  report_ = TransversalityReport{};
  report_.logical_x_weight = log_x_.weight();
  report_.logical_z_weight = log_z_.weight();

  if (x_stab_.empty() && z_stab_.empty())
    report_.reasons.push_back("no stabilizer generators");

  if (!same_row_space(v_.generator(), w_.generator()))
    report_.reasons.push_back("property 1: V != W");

  // Property 2, first clause: every nonzero stabilizer element must have
  // weight 0 mod 4. Checked over the whole group, not just the chosen
  // generators, so the verdict is generator-independent; one reason per
  // distinct violating weight.
  std::vector<std::size_t> bad_weights;
  for (const BitMatrix* gens : {&x_stab_, &z_stab_}) {
    const std::size_t k = gens->size();
    if (k > 16) continue;
    for (std::uint64_t m = 1; m < (1ull << k); ++m) {
      BitVec s(n_);
      for (std::size_t i = 0; i < k; ++i)
        if ((m >> i) & 1) s ^= (*gens)[i];
      const std::size_t w = s.weight();
      if (w % 4 != 0 && std::find(bad_weights.begin(), bad_weights.end(), w) == bad_weights.end())
        bad_weights.push_back(w);
    }
  }
  std::sort(bad_weights.begin(), bad_weights.end());
  for (auto w : bad_weights)
    report_.reasons.push_back("stabilizer weight " + std::to_string(w) + " != 0 mod 4");

  auto check_logical = [&](const BitVec& rep, const char* name) {
    const std::size_t w = rep.weight();
    if (w % 4 != 1 && w % 4 != 3)
      report_.reasons.push_back(std::string("property 2: logical ") + name + " weight " +
                                std::to_string(w) + " != 1 or 3 mod 4");
  };
  check_logical(log_x_, "X");
  check_logical(log_z_, "Z");

  report_.ok = report_.reasons.empty();
  p_uses_pdg_ = (log_x_.weight() % 4 == 3) || (log_z_.weight() % 4 == 3);
}

void CssCode::synthesize_encoding() {
  enc_.clear();
  // RREF the X-stabilizer generators; record pivots.
  BitMatrix gx = x_stab_;
  row_reduce(gx);
  std::vector<std::size_t> pivots;
  for (const auto& row : gx)
    for (std::size_t c = 0; c < n_; ++c)
      if (row.get(c)) {
        pivots.push_back(c);
        break;
      }
  // Reduce the logical X representative off the pivot columns.
  BitVec xl = log_x_;
  if (!xl.any()) {
    // degenerate code without a logical pair: trivial identity encoding
    input_wire_ = 0;
    return;
  }
  for (std::size_t r = 0; r < gx.size(); ++r)
    if (xl.get(pivots[r])) xl ^= gx[r];
  input_wire_ = xl.support().front();

  // Fan the input out over the logical support, then expand stabilizers.
  for (auto j : xl.support())
    if (j != input_wire_) enc_.push_back({EncGate::CNOT, input_wire_, j});
  for (std::size_t r = 0; r < gx.size(); ++r) {
    enc_.push_back({EncGate::H, pivots[r], 0});
    for (auto j : gx[r].support())
      if (j != pivots[r]) enc_.push_back({EncGate::CNOT, pivots[r], j});
  }
}

LogicalGate CssCode::logical_gate(LogicalGateName g) const {
  switch (g) {
    case LogicalGateName::H:
      return {g, true, "H on every qubit"};
    case LogicalGateName::P:
      return {g, true, p_uses_pdg_ ? "P-dagger on every qubit" : "P on every qubit"};
    case LogicalGateName::CNOT:
      return {g, true, "pairwise CNOT across blocks"};
    case LogicalGateName::X:
      return {g, true, "X on the logical-X support"};
    case LogicalGateName::Z:
      return {g, true, "Z on the logical-Z support"};
    case LogicalGateName::MeasZ:
      return {g, true, "qubit-wise Z measurement plus classical decode"};
    case LogicalGateName::MeasX:
      return {g, true, "qubit-wise X measurement plus classical decode"};
    case LogicalGateName::CG:
      return {g, false, "verification of Clifford-stabilized states"};
    case LogicalGateName::T:
      return {g, false, "distributed gate teleportation with a verified magic state"};
  }
  return {g, false, ""};
}

void sv_encode(StateVector& sv, const CssCode& code, const std::vector<std::size_t>& qubits) {
  for (const auto& g : code.encoding_circuit()) {
    if (g.kind == EncGate::H)
      sv.h(qubits[g.a]);
    else
      sv.cnot(qubits[g.a], qubits[g.b]);
  }
}

void sv_decode(StateVector& sv, const CssCode& code, const std::vector<std::size_t>& qubits) {
  const auto& enc = code.encoding_circuit();
  for (auto it = enc.rbegin(); it != enc.rend(); ++it) {
    if (it->kind == EncGate::H)
      sv.h(qubits[it->a]);
    else
      sv.cnot(qubits[it->a], qubits[it->b]);
  }
}

EcReport sv_error_correct(StateVector& sv, const CssCode& code,
                          const std::vector<std::size_t>& qubits, Rng& rng) {
  EcReport rep;
  // Z-type stabilizer syndromes flag X errors. Parities are measured along
  // the rows of H_V so the outcome vector is exactly V's classical syndrome
  // of the X-error pattern.
  const auto& hv = code.v().parity_check();
  BitVec synd_z(hv.size());
  for (std::size_t r = 0; r < hv.size(); ++r) {
    std::vector<std::size_t> sup;
    for (auto pos : hv[r].support()) sup.push_back(qubits[pos]);
    synd_z.set(r, sv.measure_z_parity(sup, rng) == 1);
  }
  // X-type syndromes flag Z errors; measured in the Hadamard frame.
  const auto& hw = code.w().parity_check();
  BitVec synd_x(hw.size());
  for (std::size_t r = 0; r < hw.size(); ++r) {
    std::vector<std::size_t> sup;
    for (auto pos : hw[r].support()) sup.push_back(qubits[pos]);
    for (auto q : sup) sv.h(q);
    synd_x.set(r, sv.measure_z_parity(sup, rng) == 1);
    for (auto q : sup) sv.h(q);
  }

  // The Z-syndrome of an X-error pattern e is exactly V's classical
  // syndrome of e when the generators are H_V rows; same on the W side.
  auto ex = code.v().error_for_syndrome(synd_z);
  auto ez = code.w().error_for_syndrome(synd_x);
  if (!ex || !ez) {
    rep.too_many_errors = true;
    return rep;
  }
  for (auto p : ex->support()) {
    sv.x(qubits[p]);
    rep.x_error_positions.push_back(p);
  }
  for (auto p : ez->support()) {
    sv.z(qubits[p]);
    rep.z_error_positions.push_back(p);
  }
  return rep;
}

}  // namespace mpqc
