#pragma once

#include <memory>
#include <set>

#include "mpqc/adversary.hpp"
#include "mpqc/circuit.hpp"
#include "mpqc/css_code.hpp"
#include "mpqc/frame.hpp"
#include "mpqc/netsim.hpp"
#include "mpqc/tableau.hpp"

namespace mpqc {

// The two-level share bookkeeping: entry (j, l) is the physical qubit from
// node j's second-level encoding held by node l. Slot ids index into the
// network's ownership/workspace ledger; the quantum payload lives in the
// run's backend driver under (backend_grid, flat position).
struct ShareGrid {
  int backend_grid = -1;
  std::size_t dealer = 0;
  GridKind kind = GridKind::Data;
  int level = 2;
  std::size_t n = 0;
  std::vector<int> slots;  // flat j*n+l (level 2) or l (level 1); -1 freed
  bool alive = true;

  std::size_t flat(std::size_t j, std::size_t l) const { return level == 2 ? j * n + l : l; }
};

// Cheater-set bookkeeping: per-dealer per-block second-level error sets
// B_{i,l}, per-dealer apparent-cheater sets B_i, the global cumulative
// B = union_i B_i, and the reconstruction-time extensions B~_{i,j}.
class CheaterSets {
 public:
  CheaterSets(std::size_t n, std::size_t t) : n_(n), t_(t), block_errors_(n) {
    for (auto& be : block_errors_) be.resize(n);
    first_level_.resize(n);
    recon_.resize(n);
    for (auto& r : recon_) r.resize(n);
  }

  void note_block_errors(std::size_t dealer, std::size_t block,
                         const std::vector<std::size_t>& positions, Transcript& tr);
  void note_first_level_errors(std::size_t dealer, const std::vector<std::size_t>& positions,
                               Transcript& tr);
  void note_uncorrectable(std::size_t dealer, Transcript& tr);
  void force_all(Transcript& tr);  // B = [n]

  // reconstruction: B~_{i,j} starts from B_{i,j} and grows
  void note_recon_errors(std::size_t dealer, std::size_t block,
                         const std::vector<std::size_t>& positions, Transcript& tr);
  const std::set<std::size_t>& recon_set(std::size_t dealer, std::size_t block) const {
    return recon_[dealer][block];
  }
  const std::set<std::size_t>& block_set(std::size_t dealer, std::size_t block) const {
    return block_errors_[dealer][block];
  }

  // B_i: first-level error positions plus blocks whose second-level error
  // set exceeds t.
  std::set<std::size_t> dealer_set(std::size_t dealer) const;
  std::set<std::size_t> global() const;
  bool over_threshold() const { return global().size() > t_; }
  bool forced_abort() const { return force_all_; }

  void seed_recon_from_blocks(std::size_t dealer);

 private:
  std::size_t n_, t_;
  bool force_all_ = false;
  std::vector<std::vector<std::set<std::size_t>>> block_errors_;  // [dealer][block]
  std::vector<std::set<std::size_t>> first_level_;                // [dealer]
  std::vector<bool> dealer_uncorrectable_ = std::vector<bool>();
  std::vector<std::vector<std::set<std::size_t>>> recon_;  // [dealer][block]
};

// Backend driver: the quantum side of one protocol run. The protocol layer
// performs all choreography (slots, transfers, broadcasts) through the
// Network and calls down here for state evolution and measurement words.
class ProtocolDriver {
 public:
  virtual ~ProtocolDriver() = default;

  virtual int deal_grid(GridKind kind, std::size_t dealer, int level, const InputState& st,
                        const DealerDeviation& dev) = 0;
  virtual void inject(int gid, std::size_t flat_pos, Pauli p) = 0;
  // Pauli on a first-level qubit in transit, before the re-encode.
  virtual void inject_first_level(int gid, std::size_t j, Pauli p) = 0;
  // Node j's second-level re-encode of its received first-level qubit
  // (backends that carry physical state do the encoding here).
  virtual void encode_block(int gid, std::size_t j) { (void)gid; (void)j; }

  virtual void transversal_h(int gid) = 0;
  virtual void transversal_p(int gid) = 0;
  virtual void logical_x(int gid) = 0;
  virtual void logical_z(int gid) = 0;
  virtual void transversal_cnot(int control, int target) = 0;
  virtual void transversal_cg(int control, int target) = 0;
  virtual void correction_xpdg(int gid) = 0;

  // Full-grid measurement in computational (fourier=false) or Fourier
  // basis; returns the flat word of true physical outcomes.
  virtual BitVec measure_grid(int gid, bool fourier) = 0;

  // Honest nodes replace every share with fresh |0>.
  virtual void replace_with_zero(int gid) = 0;
  virtual void discard(int gid) = 0;

  // Reconstruction: per-block error correction and decode.
  virtual FrameBackend::BlockEc block_ec(int gid, std::size_t block) = 0;
  // After per-block decode, assemble the output from the kept first-level
  // positions (level 2) or finish the single-level decode (level 1).
  virtual void finalize_output(int gid, const std::vector<std::size_t>& kept,
                               int residual_x, int residual_z) = 0;

  // Promote a classical zero grid into the logical register (frame backend;
  // no-op elsewhere).
  virtual void promote(int gid) { (void)gid; }

  virtual bool supports_cg() const { return true; }

  // Joint density matrix over the output wires of the listed grids.
  virtual std::vector<cplx> output_density(const std::vector<int>& gids) = 0;
  // Reduced density over arbitrary (grid, position) slots; statevector
  // backend only (used by the privacy check).
  virtual std::vector<cplx> slot_density(const std::vector<std::pair<int, std::size_t>>&) {
    throw BackendMismatch("slot density requires the statevector backend");
  }
  // Direct access for tests; null on non-frame backends.
  virtual FrameBackend* frame() { return nullptr; }
};

std::unique_ptr<ProtocolDriver> make_driver(const NetworkConfig& cfg, const CssCode& code);

// One protocol run's shared context.
struct RunContext {
  NetworkConfig cfg;
  const CssCode* code;
  Transcript transcript;
  std::unique_ptr<Network> net;
  std::unique_ptr<ProtocolDriver> driver;
  CheaterSets sets;
  AdversaryStrategy* adversary = nullptr;  // may be null (honest)
  Rng adv_rng{0};
  GroundTruthLog ground_truth;
  std::vector<std::unique_ptr<ShareGrid>> grids;
  bool replaced_with_zero = false;  // |B| > t observed; motions continue

  RunContext(const NetworkConfig& c, const CssCode& cd, AdversaryStrategy* adv);
  std::size_t n() const { return cfg.n; }
  std::size_t t() const { return code->t(); }
  bool corrupted(std::size_t node) const {
    return adversary && adversary->corrupted().count(node) > 0;
  }
  void maybe_replace_all_shares();
};

// --- protocol operations -------------------------------------------------

// VQSS sharing: two-level (or single-level) encode and distribute.
ShareGrid* vqss_share(RunContext& ctx, std::size_t dealer, GridKind kind, const InputState& st);

struct VerifyResult {
  bool pass = false;
  std::set<std::size_t> dealer_b;  // B_i after this verification
  std::size_t rounds = 0;
  std::size_t ancilla_grids_consumed = 0;
};

// VQSS verification (sequential, s^2+2s rounds) and its VQSS(0)
// variant which additionally requires every standard-basis decode to be 0.
VerifyResult vqss_verify(RunContext& ctx, ShareGrid& grid, bool zero_mode);

struct GTeleResult {
  int decoded_value = 0;
  bool uncorrectable = false;
};

// Gate teleportation: consumes the data grid, leaves the teleported state in the
// magic grid (which the caller re-labels as data).
GTeleResult gate_teleport(RunContext& ctx, ShareGrid& data, ShareGrid& magic);

struct MagicPair {
  ShareGrid* zero = nullptr;
  ShareGrid* magic = nullptr;
  bool accepted = false;
};

// Magic-state verification: verified |0> and |m> grids plus the stabilizer check; on a
// failed check forces B = [n].
MagicPair vmagic(RunContext& ctx, std::size_t dealer);

// --- MPQC ------------------------------------------------------------------

struct MpqcOutput {
  std::size_t wire = 0;
  std::size_t node = 0;
  bool bottom = false;     // abort flag delivered instead of a state
  bool rejected = false;   // reconstruction failed beyond repair
  int backend_grid = -1;
};

struct MpqcResult {
  bool aborted = false;
  std::vector<MpqcOutput> outputs;
  std::uint64_t transcript_digest = 0;
  Transcript transcript;
  ResourceLedger ledger;
  GroundTruthLog ground_truth;
  std::set<std::size_t> final_b;
  // Live backend for output-state comparisons.
  std::shared_ptr<RunContext> ctx;
};

// The full MPQC run. `inputs` supplies one state per circuit input
// wire; dealer of wire w is node w.
MpqcResult mpqc_run(const NetworkConfig& cfg, const CssCode& code, const Circuit& circuit,
                    const std::vector<InputState>& inputs, AdversaryStrategy* adversary);

// Reduced density matrix over the output wires of a completed run, wires in
// `outputs` order. Works for frame and statevector backends.
std::vector<cplx> output_density(const MpqcResult& r);
// The ideal-oracle density over the same wires: runs the circuit directly
// on a bare register, no protocol code path beyond the interpreter.
std::vector<cplx> ideal_density(const Circuit& circuit, const std::vector<InputState>& inputs);

// Interprets the circuit on a bare statevector (wire i = qubit i). Shared
// by the ideal oracle and the cross-validation harness.
void interpret_circuit(StateVector& sv, const Circuit& circuit);

}  // namespace mpqc
