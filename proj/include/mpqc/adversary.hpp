#pragma once

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpqc/bitvec.hpp"
#include "mpqc/frame.hpp"
#include "mpqc/netsim.hpp"

namespace mpqc {

enum class GridKind { Data, AncillaZ, AncillaX, Zero, Magic, CircuitAncilla };

inline const char* grid_kind_name(GridKind k) {
  switch (k) {
    case GridKind::Data: return "data";
    case GridKind::AncillaZ: return "anc-z";
    case GridKind::AncillaX: return "anc-x";
    case GridKind::Zero: return "zero";
    case GridKind::Magic: return "magic";
    case GridKind::CircuitAncilla: return "circuit-anc";
  }
  return "?";
}

// Context handed to strategy hooks. Strategies are non-adaptive: this
// static description plus the adversary's own rng stream is all they see.
struct HookContext {
  Phase phase = Phase::Sharing;
  GridKind kind = GridKind::Data;
  std::size_t dealer = 0;  // dealer of the touched grid
  std::size_t node = 0;    // acting (corrupted) node
  std::size_t block = 0;   // block index j of the touched slot
  std::size_t pos = 0;     // holder index l of the touched slot
  // true while a first-level qubit is in transit: a Pauli there acts as a
  // whole-block logical error, which carries no syndrome and is only caught
  // by the verification statistics
  bool first_level = false;
};

// Logical single-qubit descriptors for dealt grids.
struct InputState {
  enum Kind { Zero, One, Plus, Magic, Amplitudes } kind = Zero;
  std::array<cplx, 2> amps{cplx(1.0), cplx(0.0)};

  static InputState zero() { return {Zero, {cplx(1.0), cplx(0.0)}}; }
  static InputState one() { return {One, {cplx(0.0), cplx(1.0)}}; }
  static InputState plus() { return {Plus, {cplx(kInvSqrt2), cplx(kInvSqrt2)}}; }
  static InputState magic() { return {Magic, {cplx(kInvSqrt2), kEipi4 * kInvSqrt2}}; }
  static InputState amplitudes(const std::array<cplx, 2>& a) { return {Amplitudes, a}; }
};

// Deviations a cheating dealer may apply while dealing a grid.
struct DealerDeviation {
  std::optional<InputState> logical_override;
  // Pauli on a first-level qubit before the second-level re-encode.
  std::vector<std::pair<std::size_t, Pauli>> first_level;
  // Pauli on an individual share, flat position (block*n + holder).
  std::vector<std::pair<std::size_t, Pauli>> second_level;
};

// Active non-adaptive adversary. The corrupted set is fixed before the run;
// hooks fire only for nodes in it and may depend on nothing but the hook
// context and the adversary stream.
class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;

  const std::set<std::size_t>& corrupted() const { return corrupted_; }
  void set_corrupted(std::set<std::size_t> c) { corrupted_ = std::move(c); }
  virtual std::string name() const = 0;

  virtual void on_dealer_deal(DealerDeviation&, const HookContext&, Rng&) {}
  virtual Pauli on_receive_qubit(const HookContext&, Rng&) { return Pauli::I; }
  virtual Pauli on_send_qubit(const HookContext&, Rng&) { return Pauli::I; }
  virtual void on_broadcast(BitVec& bits, const HookContext&, Rng&) { (void)bits; }
  virtual Pauli on_reconstruct_return(const HookContext&, Rng&) { return Pauli::I; }

 private:
  std::set<std::size_t> corrupted_;
};

// Ground-truth record of everything the adversary actually did; invisible
// to protocol logic, consumed by the audit.
struct GroundTruthLog {
  struct Injection {
    std::size_t dealer;
    GridKind kind;
    std::size_t block, pos;
    Pauli pauli;
    std::string step;
  };
  std::vector<Injection> injections;
  std::vector<std::string> broadcast_lies;  // context strings
  std::vector<std::size_t> dealer_first_level_errors;  // per bad-deal event

  void log_injection(const HookContext& c, Pauli p, const std::string& step) {
    if (p == Pauli::I) return;
    injections.push_back({c.dealer, c.kind, c.block, c.pos, p, step});
  }
};

// Expected end-to-end behavior class of a strategy, used to route each
// corpus entry to the right acceptance checks.
enum class VerdictClass { PassCorrected, DealerCaught, Abort };

struct CorpusEntry {
  std::string name;
  VerdictClass expected;
  bool frame_safe;  // propagates through C-G on the frame backend
  std::size_t cheater_count;
  std::unique_ptr<AdversaryStrategy> (*make)(std::set<std::size_t> corrupted);
};

// Named catalog used by the acceptance suite.
const std::vector<CorpusEntry>& strategy_corpus();
std::unique_ptr<AdversaryStrategy> make_strategy(const std::string& name,
                                                 std::set<std::size_t> corrupted);

struct AuditReport {
  bool ok = true;
  std::vector<std::string> findings;
};

// Compares protocol-identified cheater sets against the ground truth: every
// flagged position must be attributable to an injection or broadcast lie,
// and under a <= t corrupted set from a pass-class strategy no honest node
// may be blamed.
AuditReport ground_truth_audit(const GroundTruthLog& gt,
                               const std::set<std::size_t>& final_b,
                               const std::set<std::size_t>& corrupted,
                               VerdictClass expected);

}  // namespace mpqc
