#include "mpqc/protocols.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mpqc {

// ---------------------------------------------------------------------------
// CheaterSets

namespace {
std::string positions_str(const std::vector<std::size_t>& ps) {
  std::ostringstream out;
  for (auto p : ps) out << p + 1 << ' ';
  return out.str();
}
}  // namespace

void CheaterSets::note_block_errors(std::size_t dealer, std::size_t block,
                                    const std::vector<std::size_t>& positions, Transcript& tr) {
  if (positions.empty()) return;
  for (auto p : positions) block_errors_[dealer][block].insert(p);
  tr.log(Transcript::Event::BsetUpdate, "d" + std::to_string(dealer + 1) + " block " +
                                            std::to_string(block + 1) + ": " +
                                            positions_str(positions));
}

void CheaterSets::note_first_level_errors(std::size_t dealer,
                                          const std::vector<std::size_t>& positions,
                                          Transcript& tr) {
  if (positions.empty()) return;
  for (auto p : positions) first_level_[dealer].insert(p);
  tr.log(Transcript::Event::BsetUpdate,
         "d" + std::to_string(dealer + 1) + " first-level: " + positions_str(positions));
}

void CheaterSets::note_uncorrectable(std::size_t dealer, Transcript& tr) {
  for (std::size_t p = 0; p < n_; ++p) first_level_[dealer].insert(p);
  tr.log(Transcript::Event::BsetUpdate, "d" + std::to_string(dealer + 1) + " uncorrectable");
}

void CheaterSets::force_all(Transcript& tr) {
  force_all_ = true;
  tr.log(Transcript::Event::BsetUpdate, "B = [n]");
}

void CheaterSets::note_recon_errors(std::size_t dealer, std::size_t block,
                                    const std::vector<std::size_t>& positions, Transcript& tr) {
  if (positions.empty()) return;
  for (auto p : positions) recon_[dealer][block].insert(p);
  tr.log(Transcript::Event::BsetUpdate, "recon d" + std::to_string(dealer + 1) + " block " +
                                            std::to_string(block + 1) + ": " +
                                            positions_str(positions));
}

void CheaterSets::seed_recon_from_blocks(std::size_t dealer) {
  for (std::size_t j = 0; j < n_; ++j)
    for (auto p : block_errors_[dealer][j]) recon_[dealer][j].insert(p);
}

std::set<std::size_t> CheaterSets::dealer_set(std::size_t dealer) const {
  std::set<std::size_t> b = first_level_[dealer];
  for (std::size_t l = 0; l < n_; ++l)
    if (block_errors_[dealer][l].size() > t_) b.insert(l);
  if (force_all_)
    for (std::size_t p = 0; p < n_; ++p) b.insert(p);
  return b;
}

std::set<std::size_t> CheaterSets::global() const {
  std::set<std::size_t> b;
  for (std::size_t d = 0; d < n_; ++d) {
    auto bd = dealer_set(d);
    b.insert(bd.begin(), bd.end());
  }
  return b;
}

// ---------------------------------------------------------------------------
// Frame driver

namespace {

class FrameDriver final : public ProtocolDriver {
 public:
  FrameDriver(const CssCode& code, const NetworkConfig& cfg)
      : fb_(code, cfg.level, cfg.seed), code_(&code) {}

  int deal_grid(GridKind kind, std::size_t, int level, const InputState& st,
                const DealerDeviation& dev) override {
    const InputState eff = dev.logical_override.value_or(st);
    int gid = -1;
    const bool needs_wire = kind == GridKind::Data || kind == GridKind::Magic ||
                            eff.kind == InputState::Magic ||
                            eff.kind == InputState::Amplitudes;
    if (needs_wire) {
      gid = fb_.new_wire_grid(eff.amps);
    } else {
      switch (eff.kind) {
        case InputState::Zero: gid = fb_.new_zero_grid(); break;
        case InputState::One: gid = fb_.new_classical_grid({false, 1}, {true, 0}); break;
        case InputState::Plus: gid = fb_.new_plus_grid(); break;
        default: gid = fb_.new_wire_grid(eff.amps); break;
      }
    }
    for (const auto& [j, p] : dev.first_level) inject_first_level(gid, j, p);
    for (const auto& [pos, p] : dev.second_level) fb_.inject(gid, pos, p);
    (void)level;
    return gid;
  }

  void inject(int gid, std::size_t pos, Pauli p) override { fb_.inject(gid, pos, p); }

  void inject_first_level(int gid, std::size_t j, Pauli p) override {
    if (fb_.level() == 1) {
      fb_.inject(gid, j, p);
      return;
    }
    // a Pauli on first-level qubit j commutes with the re-encode as the
    // corresponding logical operator on block j
    if (pauli_has_x(p))
      for (auto l : code_->logical_x().support())
        fb_.inject(gid, j * code_->n() + l, Pauli::X);
    if (pauli_has_z(p))
      for (auto l : code_->logical_z().support())
        fb_.inject(gid, j * code_->n() + l, Pauli::Z);
  }

  void transversal_h(int gid) override { fb_.transversal_h(gid); }
  void transversal_p(int gid) override { fb_.transversal_p(gid); }
  void logical_x(int gid) override { fb_.logical_x(gid); }
  void logical_z(int gid) override { fb_.logical_z(gid); }
  void transversal_cnot(int c, int t) override { fb_.transversal_cnot(c, t); }
  void transversal_cg(int c, int t) override { fb_.transversal_cg(c, t); }
  void correction_xpdg(int gid) override { fb_.correction_xpdg(gid); }

  BitVec measure_grid(int gid, bool fourier) override { return fb_.measure_grid(gid, fourier); }

  void replace_with_zero(int gid) override { fb_.mark_raw_zero(gid); }
  void discard(int gid) override { fb_.discard(gid); }
  void promote(int gid) override { fb_.promote_to_wire(gid); }

  FrameBackend::BlockEc block_ec(int gid, std::size_t block) override {
    return fb_.level() == 2 ? fb_.block_ec(gid, block) : fb_.grid_ec(gid);
  }

  void finalize_output(int gid, const std::vector<std::size_t>&, int rx, int rz) override {
    fb_.apply_residual(gid, rx, rz);
  }

  std::vector<cplx> output_density(const std::vector<int>& gids) override {
    std::vector<std::size_t> wires;
    for (int gid : gids) wires.push_back(fb_.wire_index(gid));
    return fb_.logical_register().reduced_density(wires);
  }

  FrameBackend* frame() override { return &fb_; }

 private:
  FrameBackend fb_;
  const CssCode* code_;
};

// ---------------------------------------------------------------------------
// Statevector driver (single level)

class SvDriver final : public ProtocolDriver {
 public:
  SvDriver(const CssCode& code, const NetworkConfig& cfg) : code_(&code), cfg_(cfg) {}

  int deal_grid(GridKind, std::size_t, int, const InputState& st,
                const DealerDeviation& dev) override {
    const InputState eff = dev.logical_override.value_or(st);
    const int gid = next_gid_++;
    auto island = std::make_shared<Island>(StateVector(0, cfg_.sv_capacity));
    const std::size_t n = code_->n();
    std::vector<std::array<cplx, 2>> init(n, {cplx(1.0), cplx(0.0)});
    init[code_->input_wire()] = eff.amps;
    island->sv = StateVector::product(init, cfg_.sv_capacity);
    for (std::size_t l = 0; l < n; ++l) island->layout.emplace_back(gid, l);
    islands_[gid] = island;
    std::vector<std::size_t> qs(n);
    for (std::size_t i = 0; i < n; ++i) qs[i] = i;
    sv_encode(island->sv, *code_, qs);
    grids_[gid] = {derive_stream(cfg_.seed, "grid", static_cast<std::uint64_t>(gid)), true};
    for (const auto& [j, p] : dev.first_level) inject(gid, j, p);
    for (const auto& [pos, p] : dev.second_level) inject(gid, pos, p);
    return gid;
  }

  void inject(int gid, std::size_t pos, Pauli p) override {
    auto [isl, q] = locate(gid, pos);
    if (pauli_has_x(p) && pauli_has_z(p))
      isl->sv.y(q);
    else if (pauli_has_x(p))
      isl->sv.x(q);
    else if (pauli_has_z(p))
      isl->sv.z(q);
  }

  void inject_first_level(int gid, std::size_t j, Pauli p) override { inject(gid, j, p); }

  void transversal_h(int gid) override {
    for_each_qubit(gid, [&](StateVector& sv, std::size_t q) { sv.h(q); });
  }
  void transversal_p(int gid) override {
    const bool pdg = code_->logical_p_uses_pdg();
    for_each_qubit(gid, [&](StateVector& sv, std::size_t q) { pdg ? sv.pdg(q) : sv.p(q); });
  }
  void logical_x(int gid) override {
    auto isl = islands_.at(gid);
    for (auto pos : code_->logical_x().support()) isl->sv.x(qubit_of(*isl, gid, pos));
  }
  void logical_z(int gid) override {
    auto isl = islands_.at(gid);
    for (auto pos : code_->logical_z().support()) isl->sv.z(qubit_of(*isl, gid, pos));
  }

  void transversal_cnot(int c, int t) override {
    auto isl = merge_islands(c, t);
    for (std::size_t l = 0; l < code_->n(); ++l)
      isl->sv.cnot(qubit_of(*isl, c, l), qubit_of(*isl, t, l));
  }

  // The ideal-logical C-G variant: qubit-wise C-(XP+) is not the logical
  // C-G for this code family, so the gate is applied in the decoded frame.
  // The qubit-wise variant is exposed separately for the discrepancy study.
  void transversal_cg(int c, int t) override {
    auto isl = merge_islands(c, t);
    std::vector<std::size_t> qc(code_->n()), qt(code_->n());
    for (std::size_t l = 0; l < code_->n(); ++l) {
      qc[l] = qubit_of(*isl, c, l);
      qt[l] = qubit_of(*isl, t, l);
    }
    sv_decode(isl->sv, *code_, qc);
    sv_decode(isl->sv, *code_, qt);
    isl->sv.cg(qc[code_->input_wire()], qt[code_->input_wire()]);
    sv_encode(isl->sv, *code_, qc);
    sv_encode(isl->sv, *code_, qt);
  }

  void correction_xpdg(int gid) override {
    // logical X P-dagger: P-dagger-bar is the transversal phase gate of the
    // opposite handedness, X-bar acts on the logical-X support
    const bool pdg_for_p = code_->logical_p_uses_pdg();
    for_each_qubit(gid, [&](StateVector& sv, std::size_t q) { pdg_for_p ? sv.p(q) : sv.pdg(q); });
    logical_x(gid);
  }

  BitVec measure_grid(int gid, bool fourier) override {
    auto isl = islands_.at(gid);
    const std::size_t n = code_->n();
    if (fourier)
      for (std::size_t l = 0; l < n; ++l) isl->sv.h(qubit_of(*isl, gid, l));
    BitVec word(n);
    auto& stream = grids_.at(gid).stream;
    std::vector<std::pair<std::size_t, int>> dropped;
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t q = qubit_of(*isl, gid, l);
      const int out = isl->sv.measure_z(q, stream);
      word.set(l, out == 1);
      dropped.emplace_back(q, out);
    }
    std::sort(dropped.begin(), dropped.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (auto& [q, out] : dropped) {
      isl->sv.drop_qubit(q, out);
      isl->layout.erase(isl->layout.begin() + static_cast<long>(q));
    }
    grids_.at(gid).alive = false;
    islands_.erase(gid);
    return word;
  }

  void replace_with_zero(int gid) override {
    auto isl = islands_.at(gid);
    auto& stream = grids_.at(gid).stream;
    for (std::size_t l = 0; l < code_->n(); ++l) {
      const std::size_t q = qubit_of(*isl, gid, l);
      if (isl->sv.measure_z(q, stream) == 1) isl->sv.x(q);
    }
  }

  void discard(int gid) override {
    if (!islands_.count(gid)) return;
    auto isl = islands_.at(gid);
    auto& stream = grids_.at(gid).stream;
    std::vector<std::pair<std::size_t, int>> dropped;
    for (std::size_t l = 0; l < code_->n(); ++l) {
      const std::size_t q = qubit_of(*isl, gid, l);
      dropped.emplace_back(q, isl->sv.measure_z(q, stream));
    }
    std::sort(dropped.begin(), dropped.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (auto& [q, out] : dropped) {
      isl->sv.drop_qubit(q, out);
      isl->layout.erase(isl->layout.begin() + static_cast<long>(q));
    }
    grids_.at(gid).alive = false;
    islands_.erase(gid);
  }

  FrameBackend::BlockEc block_ec(int gid, std::size_t) override {
    auto isl = islands_.at(gid);
    std::vector<std::size_t> qs(code_->n());
    for (std::size_t l = 0; l < code_->n(); ++l) qs[l] = qubit_of(*isl, gid, l);
    auto rep = sv_error_correct(isl->sv, *code_, qs, grids_.at(gid).stream);
    FrameBackend::BlockEc out;
    out.x_positions = rep.x_error_positions;
    out.z_positions = rep.z_error_positions;
    out.x_overflow = out.z_overflow = rep.too_many_errors;
    return out;
  }

  void finalize_output(int gid, const std::vector<std::size_t>&, int, int) override {
    auto isl = islands_.at(gid);
    std::vector<std::size_t> qs(code_->n());
    for (std::size_t l = 0; l < code_->n(); ++l) qs[l] = qubit_of(*isl, gid, l);
    sv_decode(isl->sv, *code_, qs);
    // drop the ancilla wires; the decoded qubit stays as the output
    auto& stream = grids_.at(gid).stream;
    std::vector<std::pair<std::size_t, int>> dropped;
    for (std::size_t l = 0; l < code_->n(); ++l) {
      if (l == code_->input_wire()) continue;
      const std::size_t q = qubit_of(*isl, gid, l);
      dropped.emplace_back(q, isl->sv.measure_z(q, stream));
    }
    std::sort(dropped.begin(), dropped.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (auto& [q, out] : dropped) {
      isl->sv.drop_qubit(q, out);
      isl->layout.erase(isl->layout.begin() + static_cast<long>(q));
    }
  }

  std::vector<cplx> output_density(const std::vector<int>& gids) override {
    // merge every island containing an output, then reduce
    auto isl = islands_.at(gids[0]);
    for (int gid : gids)
      if (islands_.at(gid) != isl) isl = merge_islands(gids[0], gid);
    std::vector<std::size_t> qs;
    for (int gid : gids) qs.push_back(qubit_of(*isl, gid, code_->input_wire()));
    return isl->sv.reduced_density(qs);
  }

  StateVector* island_state(int gid) {
    auto it = islands_.find(gid);
    return it == islands_.end() ? nullptr : &it->second->sv;
  }

  std::vector<cplx> slot_density(const std::vector<std::pair<int, std::size_t>>& slots) override {
    auto isl = islands_.at(slots[0].first);
    for (const auto& [gid, pos] : slots)
      if (islands_.at(gid) != isl) isl = merge_islands(slots[0].first, gid);
    std::vector<std::size_t> qs;
    for (const auto& [gid, pos] : slots) qs.push_back(qubit_of(*isl, gid, pos));
    return isl->sv.reduced_density(qs);
  }

 private:
  struct Island {
    explicit Island(StateVector s) : sv(std::move(s)) {}
    StateVector sv;
    std::vector<std::pair<int, std::size_t>> layout;  // qubit -> (grid, pos)
  };

  std::size_t qubit_of(const Island& isl, int gid, std::size_t pos) const {
    for (std::size_t q = 0; q < isl.layout.size(); ++q)
      if (isl.layout[q].first == gid && isl.layout[q].second == pos) return q;
    throw BackendMismatch("grid qubit not found in island");
  }

  std::pair<std::shared_ptr<Island>, std::size_t> locate(int gid, std::size_t pos) {
    auto isl = islands_.at(gid);
    return {isl, qubit_of(*isl, gid, pos)};
  }

  template <class F>
  void for_each_qubit(int gid, F&& f) {
    auto isl = islands_.at(gid);
    for (std::size_t l = 0; l < code_->n(); ++l) f(isl->sv, qubit_of(*isl, gid, l));
  }

  std::shared_ptr<Island> merge_islands(int a, int b) {
    auto ia = islands_.at(a);
    auto ib = islands_.at(b);
    if (ia == ib) return ia;
    ia->sv.merge(ib->sv);
    for (auto& entry : ib->layout) ia->layout.push_back(entry);
    for (auto& [gid, isl] : islands_)
      if (isl == ib) islands_[gid] = ia;
    return ia;
  }

  const CssCode* code_;
  NetworkConfig cfg_;
  int next_gid_ = 0;
  std::map<int, std::shared_ptr<Island>> islands_;
  struct GInfo {
    Rng stream{0};
    bool alive = false;
  };
  std::map<int, GInfo> grids_;
};

// ---------------------------------------------------------------------------
// Tableau driver (two-level, Clifford only)

class TableauDriver final : public ProtocolDriver {
 public:
  TableauDriver(const CssCode& code, const NetworkConfig& cfg)
      : code_(&code), cfg_(cfg), n_(code.n()),
        tab_((cfg.n * cfg.n) * (cfg.n + 6)), reset_rng_(derive_stream(cfg.seed, "tab-reset")) {
    for (std::size_t q = tab_.num_qubits(); q-- > 0;) free_.push_back(q);
  }

  int deal_grid(GridKind, std::size_t, int, const InputState& st,
                const DealerDeviation& dev) override {
    const InputState eff = dev.logical_override.value_or(st);
    const int gid = next_gid_++;
    TGrid grid;
    grid.alive = true;
    grid.stream = derive_stream(cfg_.seed, "grid", static_cast<std::uint64_t>(gid));
    grid.qubit.resize(n_ * n_);
    for (auto& q : grid.qubit) {
      q = free_.back();
      free_.pop_back();
    }
    // first-level encoding acts on the block input wires
    const std::size_t iw = code_->input_wire();
    const std::size_t carrier = l1_qubit(grid, iw);
    switch (eff.kind) {
      case InputState::Zero: break;
      case InputState::One: tab_.x(carrier); break;
      case InputState::Plus: tab_.h(carrier); break;
      default:
        throw UnsupportedGate("tableau backend supports stabilizer inputs only");
    }
    for (const auto& g : code_->encoding_circuit()) {
      if (g.kind == EncGate::H)
        tab_.h(l1_qubit(grid, g.a));
      else
        tab_.cnot(l1_qubit(grid, g.a), l1_qubit(grid, g.b));
    }
    grids_[gid] = std::move(grid);
    for (const auto& [j, p] : dev.first_level) inject_first_level(gid, j, p);
    pending_second_level_[gid] = dev.second_level;
    return gid;
  }

  void encode_block(int gid, std::size_t j) override {
    TGrid& grid = grids_.at(gid);
    for (const auto& g : code_->encoding_circuit()) {
      if (g.kind == EncGate::H)
        tab_.h(grid.qubit[j * n_ + g.a]);
      else
        tab_.cnot(grid.qubit[j * n_ + g.a], grid.qubit[j * n_ + g.b]);
    }
    auto it = pending_second_level_.find(gid);
    if (it != pending_second_level_.end())
      for (const auto& [pos, p] : it->second)
        if (pos / n_ == j) inject(gid, pos, p);
  }

  void inject(int gid, std::size_t pos, Pauli p) override {
    const std::size_t q = grids_.at(gid).qubit[pos];
    if (p == Pauli::X) tab_.x(q);
    if (p == Pauli::Z) tab_.z(q);
    if (p == Pauli::Y) tab_.y(q);
  }

  void inject_first_level(int gid, std::size_t j, Pauli p) override {
    TGrid& grid = grids_.at(gid);
    if (pauli_has_x(p)) tab_.x(grid.qubit[j * n_ + code_->input_wire()]);
    if (pauli_has_z(p)) tab_.z(grid.qubit[j * n_ + code_->input_wire()]);
  }

  void transversal_h(int gid) override {
    for (auto q : grids_.at(gid).qubit) tab_.h(q);
  }
  void transversal_p(int gid) override {
    const bool pdg = code_->logical_p_uses_pdg();
    for (auto q : grids_.at(gid).qubit) pdg ? tab_.pdg(q) : tab_.p(q);
  }
  void logical_x(int gid) override {
    // logical X on the two-level encoding: X-bar of X-bar
    TGrid& grid = grids_.at(gid);
    for (auto j : code_->logical_x().support())
      for (auto l : code_->logical_x().support()) tab_.x(grid.qubit[j * n_ + l]);
  }
  void logical_z(int gid) override {
    TGrid& grid = grids_.at(gid);
    for (auto j : code_->logical_z().support())
      for (auto l : code_->logical_z().support()) tab_.z(grid.qubit[j * n_ + l]);
  }
  void transversal_cnot(int c, int t) override {
    TGrid& gc = grids_.at(c);
    TGrid& gt = grids_.at(t);
    for (std::size_t i = 0; i < n_ * n_; ++i) tab_.cnot(gc.qubit[i], gt.qubit[i]);
  }
  void transversal_cg(int, int) override {
    throw UnsupportedGate("C-G is not a Clifford gate; tableau backend rejects it");
  }
  void correction_xpdg(int gid) override {
    const bool pdg_for_p = code_->logical_p_uses_pdg();
    for (auto q : grids_.at(gid).qubit) pdg_for_p ? tab_.p(q) : tab_.pdg(q);
    logical_x(gid);
  }

  BitVec measure_grid(int gid, bool fourier) override {
    TGrid& grid = grids_.at(gid);
    if (fourier)
      for (auto q : grid.qubit) tab_.h(q);
    BitVec word(n_ * n_);
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t pos = j * n_ + l;
        word.set(pos, tab_.measure_z(grid.qubit[pos], grid.stream) == 1);
      }
    release(gid);
    return word;
  }

  void replace_with_zero(int gid) override {
    TGrid& grid = grids_.at(gid);
    for (auto q : grid.qubit) tab_.reset_to_zero(q, grid.stream);
  }

  void discard(int gid) override {
    if (grids_.count(gid) && grids_.at(gid).alive) release(gid);
  }

  FrameBackend::BlockEc block_ec(int gid, std::size_t block) override {
    TGrid& grid = grids_.at(gid);
    FrameBackend::BlockEc out;
    // Z-stabilizer syndromes (X errors), along H_V rows
    BitVec ex(n_), ez(n_);
    {
      const auto& hv = code_->v().parity_check();
      BitVec synd(hv.size());
      for (std::size_t r = 0; r < hv.size(); ++r) {
        BitVec xs(tab_.num_qubits()), zs(tab_.num_qubits());
        for (auto l : hv[r].support()) zs.set(grid.qubit[block * n_ + l], true);
        synd.set(r, tab_.measure_pauli(xs, zs, grid.stream) == 1);
      }
      auto corr = code_->v().error_for_syndrome(synd);
      if (!corr) {
        out.x_overflow = true;
      } else {
        out.x_positions = corr->support();
        for (auto l : corr->support()) tab_.x(grid.qubit[block * n_ + l]);
      }
    }
    {
      const auto& hw = code_->w().parity_check();
      BitVec synd(hw.size());
      for (std::size_t r = 0; r < hw.size(); ++r) {
        BitVec xs(tab_.num_qubits()), zs(tab_.num_qubits());
        for (auto l : hw[r].support()) xs.set(grid.qubit[block * n_ + l], true);
        synd.set(r, tab_.measure_pauli(xs, zs, grid.stream) == 1);
      }
      auto corr = code_->w().error_for_syndrome(synd);
      if (!corr) {
        out.z_overflow = true;
      } else {
        out.z_positions = corr->support();
        for (auto l : corr->support()) tab_.z(grid.qubit[block * n_ + l]);
      }
    }
    if (!out.x_overflow && !out.z_overflow) decode_block(grid, block);
    return out;
  }

  void finalize_output(int gid, const std::vector<std::size_t>&, int, int) override {
    // first-level error correction and decode; the physical state already
    // carries any residual logical error
    TGrid& grid = grids_.at(gid);
    const std::size_t iw = code_->input_wire();
    auto l1 = [&](std::size_t j) { return grid.qubit[j * n_ + iw]; };
    const auto& hv = code_->v().parity_check();
    BitVec synd_z(hv.size());
    for (std::size_t r = 0; r < hv.size(); ++r) {
      BitVec xs(tab_.num_qubits()), zs(tab_.num_qubits());
      for (auto j : hv[r].support()) zs.set(l1(j), true);
      synd_z.set(r, tab_.measure_pauli(xs, zs, grid.stream) == 1);
    }
    if (auto corr = code_->v().error_for_syndrome(synd_z))
      for (auto j : corr->support()) tab_.x(l1(j));
    const auto& hw = code_->w().parity_check();
    BitVec synd_x(hw.size());
    for (std::size_t r = 0; r < hw.size(); ++r) {
      BitVec xs(tab_.num_qubits()), zs(tab_.num_qubits());
      for (auto j : hw[r].support()) xs.set(l1(j), true);
      synd_x.set(r, tab_.measure_pauli(xs, zs, grid.stream) == 1);
    }
    if (auto corr = code_->w().error_for_syndrome(synd_x))
      for (auto j : corr->support()) tab_.z(l1(j));
    const auto& enc = code_->encoding_circuit();
    for (auto it = enc.rbegin(); it != enc.rend(); ++it) {
      if (it->kind == EncGate::H)
        tab_.h(l1(it->a));
      else
        tab_.cnot(l1(it->a), l1(it->b));
    }
    grid.output_qubit = l1(iw);
  }

  std::vector<cplx> output_density(const std::vector<int>& gids) override {
    // density matrix from Pauli expectations over the output qubits
    if (gids.size() > 2)
      throw BackendMismatch("tableau output comparison limited to two outputs");
    std::vector<std::size_t> qs;
    for (int gid : gids) qs.push_back(grids_.at(gid).output_qubit);
    const std::size_t m = qs.size();
    const std::size_t d = std::size_t{1} << m;
    std::vector<cplx> rho(d * d, cplx(0.0));
    // iterate Pauli strings over m qubits
    const std::size_t strings = 1;
    (void)strings;
    std::vector<std::size_t> digits(m, 0);
    while (true) {
      BitVec xs(tab_.num_qubits()), zs(tab_.num_qubits());
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t p = digits[k];
        if (p == 1 || p == 3) xs.set(qs[k], true);  // X or Y
        if (p == 2 || p == 3) zs.set(qs[k], true);  // Z or Y
      }
      const double e = tab_.expectation(xs, zs);
      // accumulate e/d * P into rho
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
          cplx entry(1.0, 0.0);
          for (std::size_t k = 0; k < m; ++k) {
            const int rb = (r >> k) & 1, cb = (c >> k) & 1;
            cplx factor(0.0, 0.0);
            switch (digits[k]) {
              case 0: factor = rb == cb ? 1.0 : 0.0; break;
              case 1: factor = rb != cb ? 1.0 : 0.0; break;                      // X
              case 2: factor = rb == cb ? (rb ? -1.0 : 1.0) : 0.0; break;        // Z
              case 3: factor = rb != cb ? cplx(0.0, rb ? 1.0 : -1.0) : 0.0; break;  // Y
            }
            entry *= factor;
            if (entry == cplx(0.0, 0.0)) break;
          }
          rho[r * d + c] += entry * (e / static_cast<double>(d));
        }
      std::size_t k = 0;
      while (k < m && ++digits[k] == 4) digits[k++] = 0;
      if (k == m) break;
    }
    return rho;
  }

  bool supports_cg() const override { return false; }

 private:
  struct TGrid {
    bool alive = false;
    std::vector<std::size_t> qubit;
    std::size_t output_qubit = 0;
    Rng stream{0};
  };

  std::size_t l1_qubit(const TGrid& grid, std::size_t j) {
    return grid.qubit[j * n_ + code_->input_wire()];
  }

  void decode_block(TGrid& grid, std::size_t j) {
    const auto& enc = code_->encoding_circuit();
    for (auto it = enc.rbegin(); it != enc.rend(); ++it) {
      if (it->kind == EncGate::H)
        tab_.h(grid.qubit[j * n_ + it->a]);
      else
        tab_.cnot(grid.qubit[j * n_ + it->a], grid.qubit[j * n_ + it->b]);
    }
  }

  void release(int gid) {
    TGrid& grid = grids_.at(gid);
    for (auto q : grid.qubit) {
      tab_.reset_to_zero(q, reset_rng_);
      free_.push_back(q);
    }
    grid.alive = false;
  }

  const CssCode* code_;
  NetworkConfig cfg_;
  std::size_t n_;
  Tableau tab_;
  Rng reset_rng_;
  std::vector<std::size_t> free_;
  int next_gid_ = 0;
  std::map<int, TGrid> grids_;
  std::map<int, std::vector<std::pair<std::size_t, Pauli>>> pending_second_level_;
};

}  // namespace

std::unique_ptr<ProtocolDriver> make_driver(const NetworkConfig& cfg, const CssCode& code) {
  switch (cfg.backend) {
    case BackendKind::Frame: return std::make_unique<FrameDriver>(code, cfg);
    case BackendKind::Statevector: return std::make_unique<SvDriver>(code, cfg);
    case BackendKind::Tableau: return std::make_unique<TableauDriver>(code, cfg);
  }
  throw ConfigError("unknown backend");
}

// ---------------------------------------------------------------------------
// Run context and choreography helpers

RunContext::RunContext(const NetworkConfig& c, const CssCode& cd, AdversaryStrategy* adv)
    : cfg(c), code(&cd), sets(c.n, cd.t()), adversary(adv),
      adv_rng(derive_stream(c.adv_seed ? c.adv_seed : (c.seed ^ 0xadll), "adversary")) {
  cfg.validate();
  net = std::make_unique<Network>(cfg, transcript);
  driver = make_driver(cfg, cd);
}

void RunContext::maybe_replace_all_shares() {
  if (replaced_with_zero) return;
  if (!sets.over_threshold()) return;
  replaced_with_zero = true;
  transcript.log(Transcript::Event::Note, "honest nodes replace shares with |0>");
  for (auto& grid : grids)
    if (grid->alive) driver->replace_with_zero(grid->backend_grid);
}

namespace {

HookContext make_hook(const RunContext& ctx, const ShareGrid& grid, std::size_t node,
                      std::size_t block, std::size_t pos) {
  HookContext h;
  h.phase = ctx.net->phase();
  h.kind = grid.kind;
  h.dealer = grid.dealer;
  h.node = node;
  h.block = block;
  h.pos = pos;
  return h;
}

// Transfer one slot with the adversary's send/receive hooks.
void transfer_slot(RunContext& ctx, ShareGrid& grid, std::size_t flat, std::size_t to,
                   std::size_t block, std::size_t pos, const char* step) {
  const std::size_t from = ctx.net->owner(grid.slots[flat]);
  if (ctx.corrupted(from) && ctx.adversary) {
    auto h = make_hook(ctx, grid, from, block, pos);
    const Pauli p = ctx.adversary->on_send_qubit(h, ctx.adv_rng);
    if (p != Pauli::I) {
      ctx.driver->inject(grid.backend_grid, flat, p);
      ctx.ground_truth.log_injection(h, p, std::string(step) + "-send");
    }
  }
  ctx.net->transfer(grid.slots[flat], to);
  if (ctx.corrupted(to) && ctx.adversary) {
    auto h = make_hook(ctx, grid, to, block, pos);
    const Pauli p = ctx.adversary->on_receive_qubit(h, ctx.adv_rng);
    if (p != Pauli::I) {
      ctx.driver->inject(grid.backend_grid, flat, p);
      ctx.ground_truth.log_injection(h, p, std::string(step) + "-receive");
    }
  }
}

// Measures a full grid, broadcasts every holder's outcomes (with lie hooks)
// and frees the slots. Returns the broadcast word (flat indexing).
BitVec measure_and_broadcast(RunContext& ctx, ShareGrid& grid, bool fourier,
                             const char* context) {
  const std::size_t n = ctx.n();
  BitVec word_true = ctx.driver->measure_grid(grid.backend_grid, fourier);
  const std::size_t blocks = grid.level == 2 ? n : 1;
  BitVec word(word_true.size());
  for (std::size_t l = 0; l < n; ++l) {
    BitVec bits(blocks);
    for (std::size_t j = 0; j < blocks; ++j) bits.set(j, word_true.get(grid.flat(j, l)));
    if (ctx.corrupted(l) && ctx.adversary) {
      BitVec before = bits;
      auto h = make_hook(ctx, grid, l, 0, l);
      ctx.adversary->on_broadcast(bits, h, ctx.adv_rng);
      if (!(before == bits))
        ctx.ground_truth.broadcast_lies.push_back(std::string(context) + " node " +
                                                  std::to_string(l + 1));
    }
    ctx.net->broadcast(l, bits, context);
    for (std::size_t j = 0; j < blocks; ++j) word.set(grid.flat(j, l), bits.get(j));
  }
  for (auto& slot : grid.slots)
    if (slot >= 0) {
      ctx.net->free_slot(slot);
      slot = -1;
    }
  grid.alive = false;
  return word;
}

struct DecodeOutcome {
  int value = 0;
  bool uncorrectable = false;
};

// Runs the classical decode of a broadcast word against the right code side
// and accumulates the identified error positions into the cheater sets.
DecodeOutcome decode_and_accumulate(RunContext& ctx, const ShareGrid& grid, const BitVec& word,
                                    bool fourier) {
  const std::size_t n = ctx.n();
  const BinaryCode& side = fourier ? ctx.code->w() : ctx.code->v();
  const BitVec& functional = fourier ? ctx.code->logical_x() : ctx.code->logical_z();
  DecodeOutcome out;
  if (grid.level == 1) {
    auto r = single_decode(side, word, functional);
    out.value = r.value;
    if (!r.ok) {
      out.uncorrectable = true;
      ctx.sets.note_uncorrectable(grid.dealer, ctx.transcript);
    } else {
      ctx.sets.note_first_level_errors(grid.dealer, r.error_positions, ctx.transcript);
    }
    ctx.transcript.log(Transcript::Event::Decode, std::string("a=") + std::to_string(out.value));
    return out;
  }
  std::vector<BitVec> blocks(n, BitVec(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) blocks[j].set(l, word.get(j * n + l));
  auto dd = double_decode(side, blocks, functional);
  out.value = dd.value;
  for (std::size_t j = 0; j < n; ++j)
    ctx.sets.note_block_errors(grid.dealer, j, dd.block_errors[j], ctx.transcript);
  ctx.sets.note_first_level_errors(grid.dealer, dd.uncorrectable_blocks, ctx.transcript);
  ctx.sets.note_first_level_errors(grid.dealer, dd.first_level_errors, ctx.transcript);
  if (!dd.first_level_ok) {
    out.uncorrectable = true;
    ctx.sets.note_uncorrectable(grid.dealer, ctx.transcript);
  }
  ctx.transcript.log(Transcript::Event::Decode, std::string("a=") + std::to_string(out.value));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// VQSS sharing

ShareGrid* vqss_share(RunContext& ctx, std::size_t dealer, GridKind kind, const InputState& st) {
  const std::size_t n = ctx.n();
  const int level = ctx.cfg.level;

  DealerDeviation dev;
  if (ctx.corrupted(dealer) && ctx.adversary) {
    HookContext h;
    h.phase = ctx.net->phase();
    h.kind = kind;
    h.dealer = dealer;
    h.node = dealer;
    ctx.adversary->on_dealer_deal(dev, h, ctx.adv_rng);
    for (const auto& [j, p] : dev.first_level) {
      HookContext hh = h;
      hh.block = j;
      ctx.ground_truth.log_injection(hh, p, "dealer-first-level");
      ctx.ground_truth.dealer_first_level_errors.push_back(j);
    }
    for (const auto& [pos, p] : dev.second_level) {
      HookContext hh = h;
      hh.block = pos / n;
      hh.pos = pos % n;
      ctx.ground_truth.log_injection(hh, p, "dealer-second-level");
    }
  }

  auto grid = std::make_unique<ShareGrid>();
  grid->dealer = dealer;
  grid->kind = kind;
  grid->level = level;
  grid->n = n;
  grid->backend_grid = ctx.driver->deal_grid(kind, dealer, level, st, dev);
  grid->slots.assign(level == 2 ? n * n : n, -1);

  // dealer prepares the input qubit and encodes out of place
  const int input_slot = ctx.net->alloc_slot(dealer);
  std::vector<int> l1(n, -1);
  for (std::size_t j = 0; j < n; ++j) l1[j] = ctx.net->alloc_slot(dealer);
  ctx.net->free_slot(input_slot);

  if (level == 1) {
    for (std::size_t l = 0; l < n; ++l) grid->slots[l] = l1[l];
    for (std::size_t l = 0; l < n; ++l) {
      if (l == dealer) continue;
      transfer_slot(ctx, *grid, l, l, 0, l, "share-l1");
    }
    ctx.grids.push_back(std::move(grid));
    return ctx.grids.back().get();
  }

  // distribute the first level
  std::vector<int> l1_slot(n, -1);
  for (std::size_t j = 0; j < n; ++j) l1_slot[j] = l1[j];
  for (std::size_t j = 0; j < n; ++j) {
    if (j == dealer) continue;
    // first-level transit: hooks act on the future block's logical content
    const std::size_t from = dealer;
    if (ctx.corrupted(from) && ctx.adversary) {
      auto h = make_hook(ctx, *grid, from, j, 0);
      h.first_level = true;
      const Pauli p = ctx.adversary->on_send_qubit(h, ctx.adv_rng);
      if (p != Pauli::I) {
        ctx.driver->inject_first_level(grid->backend_grid, j, p);
        ctx.ground_truth.log_injection(h, p, "share-l1-send");
      }
    }
    ctx.net->transfer(l1_slot[j], j);
    if (ctx.corrupted(j) && ctx.adversary) {
      auto h = make_hook(ctx, *grid, j, j, 0);
      h.first_level = true;
      const Pauli p = ctx.adversary->on_receive_qubit(h, ctx.adv_rng);
      if (p != Pauli::I) {
        ctx.driver->inject_first_level(grid->backend_grid, j, p);
        ctx.ground_truth.log_injection(h, p, "share-l1-receive");
      }
    }
  }

  // second level, node by node: out-of-place re-encode then distribution
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) grid->slots[j * n + l] = ctx.net->alloc_slot(j);
    ctx.net->free_slot(l1_slot[j]);
    ctx.driver->encode_block(grid->backend_grid, j);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == j) continue;
      transfer_slot(ctx, *grid, j * n + l, l, j, l, "share-l2");
    }
  }
  ctx.grids.push_back(std::move(grid));
  return ctx.grids.back().get();
}

// ---------------------------------------------------------------------------
// VQSS sequential verification (and the VQSS(0) variant)

VerifyResult vqss_verify(RunContext& ctx, ShareGrid& grid, bool zero_mode) {
  VerifyResult res;
  const std::size_t rounds = ctx.cfg.verification_rounds();
  bool value_fail = false;
  for (std::size_t r = 0; r < rounds; ++r) {
    const bool zcheck = (r % 2) == 0;  // even split, remainder to Z-checks
    // Z-check ancilla: |+> for arbitrary data (its fresh logical randomness
    // masks the coupled value), |0> in VQSS(0) so the decode must hit 0.
    // X-check ancilla is |0>, coupled as the CNOT control, read in the
    // Fourier basis.
    InputState anc_state = zcheck ? (zero_mode ? InputState::zero() : InputState::plus())
                                  : InputState::zero();
    ShareGrid* anc =
        vqss_share(ctx, grid.dealer, zcheck ? GridKind::AncillaZ : GridKind::AncillaX, anc_state);
    res.ancilla_grids_consumed += 1;
    const int couple = ctx.net->beacon().draw_bit();
    if (couple) {
      if (zcheck)
        ctx.driver->transversal_cnot(grid.backend_grid, anc->backend_grid);
      else
        ctx.driver->transversal_cnot(anc->backend_grid, grid.backend_grid);
    }
    BitVec word = measure_and_broadcast(ctx, *anc, !zcheck, zcheck ? "vqss-z" : "vqss-x");
    auto dec = decode_and_accumulate(ctx, grid, word, !zcheck);
    if (zero_mode && zcheck && dec.value != 0) value_fail = true;
    res.rounds += 1;
  }
  if (value_fail) ctx.sets.note_uncorrectable(grid.dealer, ctx.transcript);
  res.dealer_b = ctx.sets.dealer_set(grid.dealer);
  res.pass = res.dealer_b.size() <= ctx.t();
  ctx.transcript.log(Transcript::Event::Verdict,
                     "dealer " + std::to_string(grid.dealer + 1) +
                         (res.pass ? " passes" : " fails") + (zero_mode ? " (vqss0)" : ""));
  return res;
}

// ---------------------------------------------------------------------------
// distributed gate teleportation

GTeleResult gate_teleport(RunContext& ctx, ShareGrid& data, ShareGrid& magic) {
  GTeleResult res;
  ctx.driver->transversal_cnot(magic.backend_grid, data.backend_grid);
  BitVec word = measure_and_broadcast(ctx, data, false, "gtele");
  auto dec = decode_and_accumulate(ctx, data, word, false);
  res.decoded_value = dec.value;
  res.uncorrectable = dec.uncorrectable;
  if (dec.uncorrectable) ctx.sets.force_all(ctx.transcript);
  const bool apply_correction = !ctx.replaced_with_zero && !ctx.sets.over_threshold();
  if (res.decoded_value == 1 && apply_correction) ctx.driver->correction_xpdg(magic.backend_grid);
  ctx.maybe_replace_all_shares();
  return res;
}

// ---------------------------------------------------------------------------
// verification of Clifford-stabilized states

MagicPair vmagic(RunContext& ctx, std::size_t dealer) {
  MagicPair pair;
  // verify |m> first, then |0> while holding it: the 4n workspace profile
  pair.magic = vqss_share(ctx, dealer, GridKind::Magic, InputState::magic());
  vqss_verify(ctx, *pair.magic, false);
  pair.zero = vqss_share(ctx, dealer, GridKind::Zero, InputState::zero());
  vqss_verify(ctx, *pair.zero, true);
  ctx.maybe_replace_all_shares();

  ctx.driver->promote(pair.zero->backend_grid);
  ctx.driver->transversal_h(pair.zero->backend_grid);
  ctx.driver->transversal_cg(pair.zero->backend_grid, pair.magic->backend_grid);
  ctx.driver->transversal_h(pair.zero->backend_grid);
  BitVec word = measure_and_broadcast(ctx, *pair.zero, false, "vmagic");
  auto dec = decode_and_accumulate(ctx, *pair.zero, word, false);
  if (dec.value == 1 || dec.uncorrectable) ctx.sets.force_all(ctx.transcript);
  ctx.maybe_replace_all_shares();
  pair.accepted = dec.value == 0 && !ctx.sets.over_threshold();
  return pair;
}

// ---------------------------------------------------------------------------
// the MPQC orchestrator

namespace {

void reconstruct_output(RunContext& ctx, ShareGrid& grid, std::size_t out_node, MpqcOutput& out) {
  const std::size_t n = ctx.n();
  out.backend_grid = grid.backend_grid;

  if (grid.level == 1) {
    for (std::size_t l = 0; l < n; ++l) {
      if (l == out_node) continue;
      transfer_slot(ctx, grid, l, out_node, 0, l, "recon");
    }
    auto ec = ctx.driver->block_ec(grid.backend_grid, 0);
    ctx.sets.note_recon_errors(out_node, 0, ec.x_positions, ctx.transcript);
    ctx.sets.note_recon_errors(out_node, 0, ec.z_positions, ctx.transcript);
    if (ec.x_overflow || ec.z_overflow) {
      out.rejected = true;
      return;
    }
    ctx.driver->finalize_output(grid.backend_grid, {}, ec.residual_x_flip, ec.residual_z_flip);
    // grid collapses to the single output qubit
    for (auto& slot : grid.slots)
      if (slot >= 0) {
        ctx.net->free_slot(slot);
        slot = -1;
      }
    ctx.net->alloc_slot(out_node);
    return;
  }

  ctx.sets.seed_recon_from_blocks(grid.dealer);
  std::set<std::size_t> b = ctx.sets.global();
  BitVec e1x(n), e1z(n);
  std::vector<bool> block_decoded(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    // gather block j at the reconstructing dealer
    for (std::size_t l = 0; l < n; ++l) {
      if (l == out_node) continue;
      transfer_slot(ctx, grid, j * n + l, out_node, j, l, "recon");
    }
    if (b.count(j)) {
      // untrusted block: not decoded
      for (std::size_t l = 0; l < n; ++l) {
        ctx.net->free_slot(grid.slots[j * n + l]);
        grid.slots[j * n + l] = -1;
      }
      continue;
    }
    auto ec = ctx.driver->block_ec(grid.backend_grid, j);
    ctx.sets.note_recon_errors(out_node, j, ec.x_positions, ctx.transcript);
    ctx.sets.note_recon_errors(out_node, j, ec.z_positions, ctx.transcript);
    std::set<std::size_t> bt = ctx.sets.recon_set(out_node, j);
    for (auto p : ctx.sets.block_set(grid.dealer, j)) bt.insert(p);
    if (ec.x_overflow || ec.z_overflow || bt.size() > ctx.t()) {
      // D adds j to the global set B
      ctx.sets.note_first_level_errors(grid.dealer, {j}, ctx.transcript);
      b = ctx.sets.global();
    } else {
      block_decoded[j] = true;
      e1x.set(j, ec.residual_x_flip);
      e1z.set(j, ec.residual_z_flip);
    }
    // block decoded down to one first-level qubit
    for (std::size_t l = 0; l < n; ++l) {
      ctx.net->free_slot(grid.slots[j * n + l]);
      grid.slots[j * n + l] = -1;
    }
    ctx.net->alloc_slot(out_node);
  }

  // step 7(b): choose n-2t of the surviving decoded shares at random
  std::vector<std::size_t> survivors;
  for (std::size_t j = 0; j < n; ++j)
    if (block_decoded[j] && !b.count(j)) survivors.push_back(j);
  const std::size_t want = n - 2 * ctx.t();
  if (survivors.size() < want) {
    out.rejected = true;
    return;
  }
  std::vector<std::size_t> kept;
  while (kept.size() < want) {
    const std::size_t pick = ctx.net->beacon().draw(survivors.size());
    kept.push_back(survivors[pick]);
    survivors.erase(survivors.begin() + static_cast<long>(pick));
  }
  std::sort(kept.begin(), kept.end());

  // erasure recovery over the kept positions; the residual logical error is
  // the erasure completion of the per-block residuals
  std::vector<bool> erased(n, true);
  for (auto j : kept) erased[j] = false;
  BitVec mx(n), mz(n);
  for (auto j : kept) {
    mx.set(j, e1x.get(j));
    mz.set(j, e1z.get(j));
  }
  int rx = 0, rz = 0;
  try {
    auto cx = ctx.code->v().erasure_decode(mx, erased);
    auto cz = ctx.code->w().erasure_decode(mz, erased);
    if (!cx.ok() || !cz.ok()) {
      out.rejected = true;
      return;
    }
    rx = ctx.code->residual_logical_x_flip(cx.codeword);
    rz = ctx.code->residual_logical_z_flip(cz.codeword);
  } catch (const AmbiguousErasure&) {
    out.rejected = true;
    return;
  }
  ctx.driver->finalize_output(grid.backend_grid, kept, rx, rz);
}

}  // namespace

MpqcResult mpqc_run(const NetworkConfig& cfg, const CssCode& code, const Circuit& circuit,
                    const std::vector<InputState>& inputs, AdversaryStrategy* adversary) {
  validate_and_stats(circuit, cfg.n);
  if (inputs.size() != circuit.input_wires)
    throw ConfigError("need one input state per circuit wire");

  auto ctx = std::make_shared<RunContext>(cfg, code, adversary);
  MpqcResult result;

  // --- sharing and verification (steps 1-2)
  ctx->net->set_phase(Phase::Sharing);
  std::vector<ShareGrid*> wire_grid(circuit.total_wires, nullptr);
  for (std::size_t w = 0; w < circuit.input_wires; ++w) {
    wire_grid[w] = vqss_share(*ctx, w, GridKind::Data, inputs[w]);
    vqss_verify(*ctx, *wire_grid[w], false);
  }
  ctx->maybe_replace_all_shares();

  // --- computation (steps 3-4)
  ctx->net->set_phase(Phase::Computation);
  for (const auto& step : circuit.steps) {
    if (step.kind == Circuit::Step::Anc) {
      // a beacon-chosen node outside B deals a verified |0>
      std::set<std::size_t> b = ctx->sets.global();
      std::vector<std::size_t> eligible;
      for (std::size_t i = 0; i < cfg.n; ++i)
        if (!b.count(i)) eligible.push_back(i);
      const std::size_t dealer =
          eligible.empty() ? 0 : eligible[ctx->net->beacon().draw(eligible.size())];
      ShareGrid* anc = vqss_share(*ctx, dealer, GridKind::CircuitAncilla, InputState::zero());
      vqss_verify(*ctx, *anc, true);
      ctx->driver->promote(anc->backend_grid);
      wire_grid[step.anc_wire] = anc;
      ctx->maybe_replace_all_shares();
      continue;
    }
    const auto& g = step.gate;
    switch (g.kind) {
      case GateKind::H: ctx->driver->transversal_h(wire_grid[g.a]->backend_grid); break;
      case GateKind::P: ctx->driver->transversal_p(wire_grid[g.a]->backend_grid); break;
      case GateKind::PDG:
        // logical P-dagger = P applied three times
        ctx->driver->transversal_p(wire_grid[g.a]->backend_grid);
        ctx->driver->transversal_p(wire_grid[g.a]->backend_grid);
        ctx->driver->transversal_p(wire_grid[g.a]->backend_grid);
        break;
      case GateKind::X: ctx->driver->logical_x(wire_grid[g.a]->backend_grid); break;
      case GateKind::Z: ctx->driver->logical_z(wire_grid[g.a]->backend_grid); break;
      case GateKind::CNOT:
        ctx->driver->transversal_cnot(wire_grid[g.a]->backend_grid,
                                      wire_grid[g.b]->backend_grid);
        break;
      case GateKind::T: {
        const std::size_t dealer = wire_grid[g.a]->dealer;
        MagicPair pair = vmagic(*ctx, dealer);
        gate_teleport(*ctx, *wire_grid[g.a], *pair.magic);
        pair.magic->kind = GridKind::Data;
        wire_grid[g.a] = pair.magic;
        break;
      }
    }
  }

  // --- abort check (step 5)
  result.aborted = ctx->sets.over_threshold();
  ctx->transcript.aborted = result.aborted;
  if (result.aborted)
    ctx->transcript.log(Transcript::Event::Abort, "|B| > t");

  // --- reconstruction (steps 6-7)
  ctx->net->set_phase(Phase::Reconstruction);
  for (const auto& [w, node] : circuit.outputs) {
    MpqcOutput out;
    out.wire = w;
    out.node = node;
    if (result.aborted || wire_grid[w] == nullptr) {
      out.bottom = true;
    } else {
      reconstruct_output(*ctx, *wire_grid[w], node, out);
    }
    result.outputs.push_back(out);
  }

  result.final_b = ctx->sets.global();
  result.transcript_digest = ctx->transcript.digest();
  result.ledger = ctx->net->ledger();
  result.ground_truth = ctx->ground_truth;
  result.transcript = ctx->transcript;
  result.ctx = ctx;
  return result;
}

std::vector<cplx> output_density(const MpqcResult& r) {
  std::vector<int> gids;
  for (const auto& o : r.outputs) {
    if (o.bottom || o.rejected) throw BackendMismatch("no output state to compare");
    gids.push_back(o.backend_grid);
  }
  return r.ctx->driver->output_density(gids);
}

void interpret_circuit(StateVector& sv, const Circuit& circuit) {
  for (const auto& step : circuit.steps) {
    if (step.kind == Circuit::Step::Anc) continue;  // ancilla wires pre-allocated |0>
    const auto& g = step.gate;
    switch (g.kind) {
      case GateKind::H: sv.h(g.a); break;
      case GateKind::P: sv.p(g.a); break;
      case GateKind::PDG: sv.pdg(g.a); break;
      case GateKind::X: sv.x(g.a); break;
      case GateKind::Z: sv.z(g.a); break;
      case GateKind::CNOT: sv.cnot(g.a, g.b); break;
      case GateKind::T: sv.t(g.a); break;
    }
  }
}

std::vector<cplx> ideal_density(const Circuit& circuit, const std::vector<InputState>& inputs) {
  std::vector<std::array<cplx, 2>> init(circuit.total_wires, {cplx(1.0), cplx(0.0)});
  for (std::size_t w = 0; w < circuit.input_wires; ++w) init[w] = inputs[w].amps;
  StateVector sv = StateVector::product(init);
  interpret_circuit(sv, circuit);
  std::vector<std::size_t> outs;
  for (const auto& [w, node] : circuit.outputs) outs.push_back(w);
  return sv.reduced_density(outs);
}

}  // namespace mpqc
