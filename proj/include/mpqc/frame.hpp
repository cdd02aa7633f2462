#pragma once

#include <optional>

#include "mpqc/css_code.hpp"
#include "mpqc/statevector.hpp"

namespace mpqc {

struct UnsupportedFramePropagation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pauli label with phases discarded; bit 0 = X component, bit 1 = Z.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline Pauli pauli_mul(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
inline bool pauli_has_x(Pauli p) { return static_cast<std::uint8_t>(p) & 1; }
inline bool pauli_has_z(Pauli p) { return static_cast<std::uint8_t>(p) & 2; }
inline Pauli conj_by_h(Pauli p) {  // X <-> Z
  switch (p) {
    case Pauli::X: return Pauli::Z;
    case Pauli::Z: return Pauli::X;
    default: return p;
  }
}
inline Pauli conj_by_p(Pauli p) {  // X <-> Y (same for P, P-dagger, XP-dagger)
  switch (p) {
    case Pauli::X: return Pauli::Y;
    case Pauli::Y: return Pauli::X;
    default: return p;
  }
}
inline char pauli_char(Pauli p) { return "IXZY"[static_cast<std::uint8_t>(p)]; }

// Sequential sampler over an affine GF(2) space: emits the bits of a
// uniformly random element in any query order, one rng draw per position
// (drawn and discarded when the bit is pinned). This mirrors qubit-wise
// Born sampling of a coset-uniform state draw for draw, which is what makes
// frame-vs-statevector transcripts bit-identical.
class CosetSampler {
 public:
  CosetSampler(BitMatrix basis, BitVec offset) : basis_(std::move(basis)), offset_(std::move(offset)) {}

  int sample_at(std::size_t pos, Rng& rng) {
    const double u = rng.next_double();
    std::size_t pivot = basis_.size();
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].get(pos)) {
        pivot = i;
        break;
      }
    if (pivot == basis_.size()) return offset_.get(pos) ? 1 : 0;
    const BitVec pv = basis_[pivot];
    basis_.erase(basis_.begin() + pivot);
    for (auto& b : basis_)
      if (b.get(pos)) b ^= pv;
    const int bit = u < 0.5 ? 1 : 0;
    if (bit != (offset_.get(pos) ? 1 : 0)) offset_ ^= pv;
    return bit;
  }

 private:
  BitMatrix basis_;
  BitVec offset_;
};

// Classical logical content of one measurement side of a grid: either a
// pinned bit or "uniform" (fresh randomness that absorbs any couplings).
struct SideContent {
  bool uniform = false;
  int pin = 0;
  void add(const SideContent& o) {
    uniform = uniform || o.uniform;
    pin ^= o.pin;
  }
};

// Scalable protocol backend: the logical state of every live grid is held
// exactly (a statevector over logical wires for grids that need quantum
// treatment, classical descriptors for basis-state ancillas), and adversary
// action is tracked as one Pauli frame label per physical qubit. Measured
// words are synthesized from the code's coset structure XOR the frame.
class FrameBackend {
 public:
  FrameBackend(const CssCode& code, int level, std::uint64_t seed,
               std::size_t logical_capacity = 14);

  int level() const { return level_; }
  std::size_t qubits_per_grid() const { return level_ == 2 ? n_ * n_ : n_; }

  // --- grid construction ---------------------------------------------
  int new_wire_grid(const std::array<cplx, 2>& amps);  // arbitrary logical state
  int new_classical_grid(SideContent z, SideContent x);
  int new_zero_grid() { return new_classical_grid({false, 0}, {true, 0}); }
  int new_plus_grid() { return new_classical_grid({true, 0}, {false, 0}); }
  // Honest |0> replacements after a failed verification: raw unencoded
  // qubits, words are all-zero XOR frame.
  void mark_raw_zero(int grid);

  bool alive(int grid) const { return grids_.at(grid).alive; }
  bool in_register(int grid) const { return grids_.at(grid).wire >= 0; }

  // --- transversal operations ------------------------------------------
  void transversal_h(int grid);
  void transversal_p(int grid);  // logical P
  void logical_x(int grid);
  void logical_z(int grid);
  void transversal_cnot(int control, int target);
  void transversal_cg(int control, int target);
  void correction_xpdg(int grid);  // gate-teleportation Clifford correction

  // Adversary injection: position is the flat qubit index (j*n+l at level
  // 2, l at level 1).
  void inject(int grid, std::size_t position, Pauli p);
  Pauli frame_at(int grid, std::size_t position) const;

  // --- measurement ------------------------------------------------------
  // Full-grid measurement in the standard or Fourier basis; synthesizes the
  // physical word (flat indexing) and consumes the grid.
  BitVec measure_grid(int grid, bool fourier);

  // --- reconstruction helpers -------------------------------------------
  struct BlockEc {
    std::vector<std::size_t> x_positions, z_positions;  // what EC reports
    bool x_overflow = false, z_overflow = false;        // no <=t explanation
    int residual_x_flip = 0, residual_z_flip = 0;       // net logical error
  };
  BlockEc block_ec(int grid, std::size_t block) const;
  // Level-1 variant: the grid is one block.
  BlockEc grid_ec(int grid) const;

  // Applies the residual logical Pauli produced by reconstruction.
  void apply_residual(int grid, int x_flip, int z_flip);

  // Releases a grid without measuring (shares replaced or discarded).
  void discard(int grid);

  // Moves a classical basis-state grid into the logical register so it can
  // participate in register-level gates (H, C-G).
  void promote_to_wire(int grid);

  // --- logical register access (for output comparison) ------------------
  StateVector& logical_register() { return reg_; }
  const StateVector& logical_register() const { return reg_; }
  // Current register index of the grid's wire.
  std::size_t wire_index(int grid) const;

  const CssCode& code() const { return *code_; }

 private:
  struct Grid {
    bool alive = false;
    bool raw_zero = false;
    int wire = -1;  // handle into wire_pos_, -1 when classical
    SideContent z, x;
    std::vector<Pauli> frame;
    Rng stream{0};
  };

  Grid& g(int id);
  const Grid& g(int id) const;
  std::optional<int> wire_z_pinned(int wire_handle) const;
  std::optional<int> wire_x_pinned(int wire_handle) const;
  int allocate_wire(const std::array<cplx, 2>& amps);
  void drop_wire(int handle, int outcome);
  // measurement internals
  BitVec ideal_word_sample(Grid& grid, bool fourier, int logical_value, bool logical_uniform);

  const CssCode* code_;
  int level_;
  std::size_t n_;
  std::uint64_t seed_;
  int next_grid_id_ = 0;
  std::vector<Grid> grids_;
  StateVector reg_;
  std::vector<int> wire_pos_;  // handle -> register index, -1 retired
};

}  // namespace mpqc
