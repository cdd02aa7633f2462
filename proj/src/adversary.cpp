#include "mpqc/adversary.hpp"

#include <algorithm>

namespace mpqc {

namespace {

class Honest final : public AdversaryStrategy {
 public:
  std::string name() const override { return "honest"; }
};

// One X on the corrupted node's held share of the first data grid.
class SingleXOnShare final : public AdversaryStrategy {
 public:
  std::string name() const override { return "single-x-on-share"; }
  Pauli on_receive_qubit(const HookContext& c, Rng&) override {
    if (c.kind != GridKind::Data || c.dealer != 0 || c.first_level || fired_) return Pauli::I;
    fired_ = true;
    return Pauli::X;
  }

 private:
  bool fired_ = false;
};

// Z on every data share the cheater ever receives.
class ZSpray final : public AdversaryStrategy {
 public:
  std::string name() const override { return "z-spray"; }
  Pauli on_receive_qubit(const HookContext& c, Rng&) override {
    return (c.kind == GridKind::Data && !c.first_level) ? Pauli::Z : Pauli::I;
  }
};

// Corrupted dealer distributes every grid with two first-level errors at
// fresh random positions. A fixed error pattern on a perfect code is
// indistinguishable from an honest deal of a different input with one
// correctable error, so only the round-to-round inconsistency accumulates
// in the B sets and gets the dealer caught.
class BadDealerWeight2 final : public AdversaryStrategy {
 public:
  std::string name() const override { return "bad-dealer-weight-2"; }
  void on_dealer_deal(DealerDeviation& dev, const HookContext&, Rng& rng) override {
    const std::size_t a = rng.next_below(7);
    std::size_t b = rng.next_below(6);
    if (b >= a) ++b;
    dev.first_level.emplace_back(a, Pauli::X);
    dev.first_level.emplace_back(b, Pauli::X);
  }
};

// Flips the first bit of every broadcast it makes.
class LieOnBroadcast final : public AdversaryStrategy {
 public:
  std::string name() const override { return "lie-on-broadcast"; }
  void on_broadcast(BitVec& bits, const HookContext&, Rng&) override {
    if (bits.size() > 0) bits.flip(0);
  }
};

// Z on every share handed back during reconstruction.
class CorruptBeforeReconstruct final : public AdversaryStrategy {
 public:
  std::string name() const override { return "corrupt-before-reconstruct"; }
  Pauli on_reconstruct_return(const HookContext&, Rng&) override { return Pauli::Z; }
  Pauli on_send_qubit(const HookContext& c, Rng& rng) override {
    return c.phase == Phase::Reconstruction ? on_reconstruct_return(c, rng) : Pauli::I;
  }
};

// Two colluding cheaters flip received shares at random. Being in two
// positions at once, their combined noise cannot be explained by any
// single-error pattern round after round, so the per-block sets blow past
// t and force an abort.
class TwoCheaterCollusion final : public AdversaryStrategy {
 public:
  std::string name() const override { return "two-cheater-collusion"; }
  Pauli on_receive_qubit(const HookContext& c, Rng& rng) override {
    if (c.kind != GridKind::Data && c.kind != GridKind::AncillaZ) return Pauli::I;
    return rng.next_bit() ? Pauli::X : Pauli::I;
  }
};

// X on the held zero-grid share right as it arrives: after the Hadamard in
// the stabilizer check it propagates as a harmless control-Z frame, so this
// one stays inside what the frame backend can represent.
class VmagicZeroX final : public AdversaryStrategy {
 public:
  std::string name() const override { return "vmagic-zero-x"; }
  Pauli on_receive_qubit(const HookContext& c, Rng&) override {
    if (c.kind != GridKind::Zero || c.first_level || fired_) return Pauli::I;
    fired_ = true;
    return Pauli::X;
  }

 private:
  bool fired_ = false;
};

// Z on the held magic-grid share; flows through C-G and the teleportation
// CNOT as plain Pauli frames.
class MagicGridZ final : public AdversaryStrategy {
 public:
  std::string name() const override { return "magic-grid-z"; }
  Pauli on_receive_qubit(const HookContext& c, Rng&) override {
    if (c.kind != GridKind::Magic || c.first_level || fired_) return Pauli::I;
    fired_ = true;
    return Pauli::Z;
  }

 private:
  bool fired_ = false;
};

template <class T>
std::unique_ptr<AdversaryStrategy> make_impl(std::set<std::size_t> corrupted) {
  auto s = std::make_unique<T>();
  s->set_corrupted(std::move(corrupted));
  return s;
}

}  // namespace

const std::vector<CorpusEntry>& strategy_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> c;
    c.push_back({"honest", VerdictClass::PassCorrected, true, 0, &make_impl<Honest>});
    c.push_back({"single-x-on-share", VerdictClass::PassCorrected, true, 1,
                 &make_impl<SingleXOnShare>});
    c.push_back({"z-spray", VerdictClass::PassCorrected, true, 1, &make_impl<ZSpray>});
    c.push_back({"lie-on-broadcast", VerdictClass::PassCorrected, true, 1,
                 &make_impl<LieOnBroadcast>});
    c.push_back({"corrupt-before-reconstruct", VerdictClass::PassCorrected, true, 1,
                 &make_impl<CorruptBeforeReconstruct>});
    c.push_back({"vmagic-zero-x", VerdictClass::PassCorrected, true, 1,
                 &make_impl<VmagicZeroX>});
    c.push_back({"magic-grid-z", VerdictClass::PassCorrected, true, 1, &make_impl<MagicGridZ>});
    c.push_back({"bad-dealer-weight-2", VerdictClass::Abort, true, 1,
                 &make_impl<BadDealerWeight2>});
    c.push_back({"two-cheater-collusion", VerdictClass::Abort, true, 2,
                 &make_impl<TwoCheaterCollusion>});
    return c;
  }();
  return corpus;
}

std::unique_ptr<AdversaryStrategy> make_strategy(const std::string& name,
                                                 std::set<std::size_t> corrupted) {
  for (const auto& e : strategy_corpus())
    if (e.name == name) return e.make(std::move(corrupted));
  throw ConfigError("unknown adversary strategy: " + name);
}

AuditReport ground_truth_audit(const GroundTruthLog& gt, const std::set<std::size_t>& final_b,
                               const std::set<std::size_t>& corrupted, VerdictClass expected) {
  AuditReport rep;
  if (expected == VerdictClass::PassCorrected) {
    // honest-node protection: nobody outside the corrupted set may be blamed
    for (auto b : final_b)
      if (!corrupted.count(b)) {
        rep.ok = false;
        rep.findings.push_back("honest node " + std::to_string(b + 1) + " entered B");
      }
    // and anything in B must be explainable by recorded adversary activity
    for (auto b : final_b) {
      bool explained = false;
      for (const auto& inj : gt.injections)
        if (inj.pos == b || inj.block == b) explained = true;
      if (!gt.broadcast_lies.empty()) explained = true;
      if (!explained) {
        rep.ok = false;
        rep.findings.push_back("position " + std::to_string(b + 1) +
                               " in B has no ground-truth explanation");
      }
    }
  }
  if (expected == VerdictClass::Abort && final_b.size() <= corrupted.size() &&
      gt.injections.empty() && gt.broadcast_lies.empty() &&
      gt.dealer_first_level_errors.empty()) {
    rep.ok = false;
    rep.findings.push_back("abort expected but the adversary did nothing");
  }
  return rep;
}

}  // namespace mpqc
