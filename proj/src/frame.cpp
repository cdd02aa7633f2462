#include "mpqc/frame.hpp"

namespace mpqc {

FrameBackend::FrameBackend(const CssCode& code, int level, std::uint64_t seed,
                           std::size_t logical_capacity)
    : code_(&code), level_(level), n_(code.n()), seed_(seed), reg_(0, logical_capacity) {}

FrameBackend::Grid& FrameBackend::g(int id) { return grids_.at(id); }
const FrameBackend::Grid& FrameBackend::g(int id) const { return grids_.at(id); }

int FrameBackend::allocate_wire(const std::array<cplx, 2>& amps) {
  StateVector one_q = StateVector::product({amps}, reg_.capacity());
  reg_.merge(one_q);
  wire_pos_.push_back(static_cast<int>(reg_.num_qubits()) - 1);
  return static_cast<int>(wire_pos_.size()) - 1;
}

void FrameBackend::drop_wire(int handle, int outcome) {
  const int idx = wire_pos_.at(handle);
  reg_.drop_qubit(static_cast<std::size_t>(idx), outcome);
  wire_pos_[handle] = -1;
  for (auto& p : wire_pos_)
    if (p > idx) --p;
}

std::size_t FrameBackend::wire_index(int grid) const {
  const int h = g(grid).wire;
  if (h < 0 || wire_pos_.at(h) < 0)
    throw BackendMismatch("grid has no live register wire");
  return static_cast<std::size_t>(wire_pos_[h]);
}

int FrameBackend::new_wire_grid(const std::array<cplx, 2>& amps) {
  Grid grid;
  grid.alive = true;
  grid.wire = allocate_wire(amps);
  grid.frame.assign(qubits_per_grid(), Pauli::I);
  grid.stream = derive_stream(seed_, "grid", static_cast<std::uint64_t>(next_grid_id_));
  grids_.push_back(std::move(grid));
  return next_grid_id_++;
}

int FrameBackend::new_classical_grid(SideContent z, SideContent x) {
  Grid grid;
  grid.alive = true;
  grid.z = z;
  grid.x = x;
  grid.frame.assign(qubits_per_grid(), Pauli::I);
  grid.stream = derive_stream(seed_, "grid", static_cast<std::uint64_t>(next_grid_id_));
  grids_.push_back(std::move(grid));
  return next_grid_id_++;
}

void FrameBackend::mark_raw_zero(int grid) {
  Grid& gr = g(grid);
  if (gr.wire >= 0) {
    // the wire is gone: measure it away deterministically is not possible
    // for arbitrary states, so collapse it with the grid stream
    const std::size_t idx = wire_index(grid);
    const int out = reg_.measure_z(idx, gr.stream);
    drop_wire(gr.wire, out);
    gr.wire = -1;
  }
  gr.raw_zero = true;
  gr.z = {false, 0};
  gr.x = {true, 0};
  std::fill(gr.frame.begin(), gr.frame.end(), Pauli::I);
}

std::optional<int> FrameBackend::wire_z_pinned(int wire_handle) const {
  const int idx = wire_pos_.at(wire_handle);
  const auto& amp = reg_.amplitudes();
  const std::size_t mask = std::size_t{1} << idx;
  bool any0 = false, any1 = false;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (std::norm(amp[i]) < 1e-24) continue;
    ((i & mask) ? any1 : any0) = true;
  }
  if (any0 && any1) return std::nullopt;
  return any1 ? 1 : 0;
}

std::optional<int> FrameBackend::wire_x_pinned(int wire_handle) const {
  const int idx = wire_pos_.at(wire_handle);
  const auto& amp = reg_.amplitudes();
  const std::size_t mask = std::size_t{1} << idx;
  bool plus = true, minus = true;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amp[i], a1 = amp[i | mask];
    if (std::abs(a0 - a1) > 1e-12) plus = false;
    if (std::abs(a0 + a1) > 1e-12) minus = false;
  }
  if (plus) return 0;
  if (minus) return 1;
  return std::nullopt;
}

void FrameBackend::transversal_h(int grid) {
  Grid& gr = g(grid);
  for (auto& f : gr.frame) f = conj_by_h(f);
  if (gr.wire >= 0)
    reg_.h(wire_index(grid));
  else
    std::swap(gr.z, gr.x);
}

void FrameBackend::transversal_p(int grid) {
  Grid& gr = g(grid);
  for (auto& f : gr.frame) f = conj_by_p(f);
  if (gr.wire < 0)
    throw UnsupportedFramePropagation("phase gate on a classical-descriptor grid");
  reg_.p(wire_index(grid));
}

void FrameBackend::logical_x(int grid) {
  Grid& gr = g(grid);
  if (gr.wire >= 0)
    reg_.x(wire_index(grid));
  else
    gr.z.pin ^= 1;
}

void FrameBackend::logical_z(int grid) {
  Grid& gr = g(grid);
  if (gr.wire >= 0)
    reg_.z(wire_index(grid));
  else
    gr.x.pin ^= 1;
}

void FrameBackend::transversal_cnot(int control, int target) {
  Grid& c = g(control);
  Grid& t = g(target);
  // frame flow: X of control copies onto target, Z of target onto control
  for (std::size_t q = 0; q < c.frame.size(); ++q) {
    const bool cx = pauli_has_x(c.frame[q]);
    const bool tz = pauli_has_z(t.frame[q]);
    if (cx) t.frame[q] = pauli_mul(t.frame[q], Pauli::X);
    if (tz) c.frame[q] = pauli_mul(c.frame[q], Pauli::Z);
  }
  const bool cw = c.wire >= 0, tw = t.wire >= 0;
  if (cw && tw) {
    reg_.cnot(wire_index(control), wire_index(target));
    return;
  }
  if (cw && !tw) {
    // Z side: target value gains the control's logical Z value
    if (!t.z.uniform) {
      auto pin = wire_z_pinned(c.wire);
      if (!pin)
        throw UnsupportedFramePropagation(
            "coupling a non-basis register wire into a pinned classical grid");
      t.z.pin ^= *pin;
    }
    // X side: control gains the target's X content
    if (t.x.uniform) {
      if (!wire_z_pinned(c.wire))
        throw UnsupportedFramePropagation(
            "X-uniform classical target would decohere a superposed control");
    } else if (t.x.pin) {
      reg_.z(wire_index(control));
    }
    return;
  }
  if (!cw && tw) {
    if (c.z.uniform)
      throw UnsupportedFramePropagation(
          "Z-uniform classical control would decohere a register target");
    if (c.z.pin) reg_.x(wire_index(target));
    if (!c.x.uniform) {
      auto pin = wire_x_pinned(t.wire);
      if (!pin)
        throw UnsupportedFramePropagation(
            "X-pinned classical control coupled to a non-X-basis register target");
      c.x.pin ^= *pin;
    }
    return;
  }
  // both classical
  t.z.add(c.z);
  c.x.add(t.x);
}

void FrameBackend::transversal_cg(int control, int target) {
  Grid& c = g(control);
  Grid& t = g(target);
  for (std::size_t q = 0; q < c.frame.size(); ++q) {
    if (pauli_has_x(c.frame[q]))
      throw UnsupportedFramePropagation(
          "X-component frame on a control qubit does not stay Pauli through C-G");
    if (pauli_has_x(t.frame[q]))
      throw UnsupportedFramePropagation(
          "X-component frame on a target qubit does not stay Pauli through C-G");
    if (pauli_has_z(t.frame[q])) c.frame[q] = pauli_mul(c.frame[q], Pauli::Z);
  }
  if (c.wire < 0 || t.wire < 0)
    throw UnsupportedFramePropagation("C-G requires both grids in the logical register");
  reg_.cg(wire_index(control), wire_index(target));
}

void FrameBackend::correction_xpdg(int grid) {
  Grid& gr = g(grid);
  for (auto& f : gr.frame) f = conj_by_p(f);  // XP^dagger moves X <-> Y
  if (gr.wire < 0) throw UnsupportedFramePropagation("correction on a classical grid");
  const std::size_t w = wire_index(grid);
  reg_.pdg(w);
  reg_.x(w);
}

void FrameBackend::inject(int grid, std::size_t position, Pauli p) {
  Grid& gr = g(grid);
  gr.frame.at(position) = pauli_mul(gr.frame.at(position), p);
}

Pauli FrameBackend::frame_at(int grid, std::size_t position) const {
  return g(grid).frame.at(position);
}

BitVec FrameBackend::ideal_word_sample(Grid& grid, bool fourier, int logical_value,
                                       bool logical_uniform) {
  const BitVec& pattern = fourier ? code_->logical_z() : code_->logical_x();
  const BitMatrix& word_basis = fourier ? code_->x_word_basis() : code_->z_word_basis();
  const std::size_t total = qubits_per_grid();

  BitMatrix basis;
  BitVec offset(total);
  if (grid.raw_zero) {
    // unencoded |0> qubits: standard-basis words are all-zero; Fourier
    // words are fully random
    if (fourier)
      for (std::size_t q = 0; q < total; ++q) {
        BitVec e(total);
        e.set(q, true);
        basis.push_back(e);
      }
  } else if (level_ == 1) {
    basis = word_basis;
    if (logical_uniform)
      basis.push_back(pattern);
    else if (logical_value)
      offset ^= pattern;
  } else {
    // first-level representative freedom
    for (const auto& h : word_basis) {
      BitVec v(total);
      for (std::size_t j = 0; j < n_; ++j)
        if (h.get(j))
          for (auto l : pattern.support()) v.set(j * n_ + l, true);
      basis.push_back(v);
    }
    // per-block second-level freedom
    for (std::size_t j = 0; j < n_; ++j)
      for (const auto& h : word_basis) {
        BitVec v(total);
        for (auto l : h.support()) v.set(j * n_ + l, true);
        basis.push_back(v);
      }
    BitVec logical_pattern(total);
    for (std::size_t j = 0; j < n_; ++j)
      if (pattern.get(j))
        for (auto l : pattern.support()) logical_pattern.set(j * n_ + l, true);
    if (logical_uniform)
      basis.push_back(logical_pattern);
    else if (logical_value)
      offset ^= logical_pattern;
  }

  // frame flips: X components show in standard-basis outcomes, Z components
  // in Fourier-basis outcomes
  for (std::size_t q = 0; q < total; ++q) {
    const Pauli f = grid.frame[q];
    if ((fourier && pauli_has_z(f)) || (!fourier && pauli_has_x(f))) offset.flip(q);
  }

  // measurement order: holders broadcast in turn, one bit per block
  CosetSampler sampler(std::move(basis), std::move(offset));
  BitVec word(total);
  if (level_ == 1) {
    for (std::size_t l = 0; l < n_; ++l) word.set(l, sampler.sample_at(l, grid.stream));
  } else {
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t pos = j * n_ + l;
        word.set(pos, sampler.sample_at(pos, grid.stream));
      }
  }
  return word;
}

BitVec FrameBackend::measure_grid(int grid, bool fourier) {
  Grid& gr = g(grid);
  if (!gr.alive) throw BackendMismatch("grid already consumed");
  int logical_value = 0;
  bool logical_uniform = false;
  if (gr.raw_zero) {
    // handled inside ideal_word_sample
  } else if (gr.wire >= 0) {
    const std::size_t idx = wire_index(grid);
    if (fourier) reg_.h(idx);
    logical_value = reg_.measure_z(idx, gr.stream);
    drop_wire(gr.wire, logical_value);
    gr.wire = -1;
  } else {
    const SideContent& side = fourier ? gr.x : gr.z;
    logical_uniform = side.uniform;
    logical_value = side.pin;
  }
  BitVec word = ideal_word_sample(gr, fourier, logical_value, logical_uniform);
  gr.alive = false;
  return word;
}

FrameBackend::BlockEc FrameBackend::block_ec(int grid, std::size_t block) const {
  const Grid& gr = g(grid);
  BlockEc out;
  BitVec ex(n_), ez(n_);
  for (std::size_t l = 0; l < n_; ++l) {
    const Pauli f = level_ == 2 ? gr.frame[block * n_ + l] : gr.frame[l];
    if (pauli_has_x(f)) ex.set(l, true);
    if (pauli_has_z(f)) ez.set(l, true);
  }
  auto corr_x = code_->v().error_for_syndrome(code_->v().syndrome(ex));
  auto corr_z = code_->w().error_for_syndrome(code_->w().syndrome(ez));
  if (!corr_x) {
    out.x_overflow = true;
  } else {
    out.x_positions = corr_x->support();
    out.residual_x_flip = code_->residual_logical_x_flip(ex ^ *corr_x);
  }
  if (!corr_z) {
    out.z_overflow = true;
  } else {
    out.z_positions = corr_z->support();
    out.residual_z_flip = code_->residual_logical_z_flip(ez ^ *corr_z);
  }
  return out;
}

FrameBackend::BlockEc FrameBackend::grid_ec(int grid) const { return block_ec(grid, 0); }

void FrameBackend::apply_residual(int grid, int x_flip, int z_flip) {
  if (!x_flip && !z_flip) return;
  Grid& gr = g(grid);
  if (gr.wire < 0) {
    if (x_flip) gr.z.pin ^= 1;
    if (z_flip) gr.x.pin ^= 1;
    return;
  }
  const std::size_t idx = wire_index(grid);
  if (x_flip) reg_.x(idx);
  if (z_flip) reg_.z(idx);
}

void FrameBackend::promote_to_wire(int grid) {
  Grid& gr = g(grid);
  if (gr.wire >= 0) return;
  std::array<cplx, 2> amps{cplx(1.0), cplx(0.0)};
  if (!gr.z.uniform) {
    amps = gr.z.pin ? std::array<cplx, 2>{cplx(0.0), cplx(1.0)}
                    : std::array<cplx, 2>{cplx(1.0), cplx(0.0)};
  } else if (!gr.x.uniform) {
    amps = gr.x.pin ? std::array<cplx, 2>{cplx(kInvSqrt2), cplx(-kInvSqrt2)}
                    : std::array<cplx, 2>{cplx(kInvSqrt2), cplx(kInvSqrt2)};
  } else {
    throw UnsupportedFramePropagation("cannot promote a fully mixed classical grid");
  }
  gr.wire = allocate_wire(amps);
}

void FrameBackend::discard(int grid) {
  Grid& gr = g(grid);
  if (!gr.alive) return;
  if (gr.wire >= 0) {
    const std::size_t idx = wire_index(grid);
    const int out = reg_.measure_z(idx, gr.stream);
    drop_wire(gr.wire, out);
    gr.wire = -1;
  }
  gr.alive = false;
}

}  // namespace mpqc
