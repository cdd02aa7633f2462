#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpqc/bitvec.hpp"
#include "mpqc/rng.hpp"

namespace mpqc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WorkspaceExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BackendKind { Statevector, Tableau, Frame };
enum class Phase { Sharing, Computation, Reconstruction };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Sharing: return "sharing";
    case Phase::Computation: return "computation";
    case Phase::Reconstruction: return "reconstruction";
  }
  return "?";
}

struct NetworkConfig {
  std::size_t n = 7;
  std::size_t s = 2;  // security parameter: s^2 + 2s verification rounds
  std::uint64_t seed = 1;
  std::uint64_t adv_seed = 0;  // 0: derived from seed
  BackendKind backend = BackendKind::Frame;
  int level = 2;  // encoding levels (statevector runs use 1)
  std::optional<std::size_t> workspace_bound;  // enforcement mode when set
  std::size_t sv_capacity = 22;

  std::size_t verification_rounds() const { return s * s + 2 * s; }

  void validate() const {
    if (n < 4) throw ConfigError("network needs at least 4 nodes");
    if (s < 1) throw ConfigError("security parameter must be >= 1");
    if (level != 1 && level != 2) throw ConfigError("encoding level must be 1 or 2");
    if (backend == BackendKind::Statevector && level != 1)
      throw ConfigError("statevector backend runs single-level only");
  }
};

// Full protocol record. Every run-visible event lands here; the digest
// makes reproducibility checkable as bit-identity.
class Transcript {
 public:
  struct Event {
    enum Kind { Send, Broadcast, BeaconDraw, BsetUpdate, PhaseMark, Verdict, Decode, Abort, Note } kind;
    std::string text;
  };

  void log(Event::Kind kind, std::string text) { events_.push_back({kind, std::move(text)}); }
  const std::vector<Event>& events() const { return events_; }

  bool aborted = false;

  std::uint64_t digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::string_view s) {
      for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
      }
      h ^= 0x1f;
      h *= 0x100000001b3ull;
    };
    for (const auto& e : events_) {
      h ^= static_cast<std::uint64_t>(e.kind) + 1;
      h *= 0x100000001b3ull;
      mix(e.text);
    }
    return h;
  }

 private:
  std::vector<Event> events_;
};

struct ResourceLedger {
  // indexed [node]
  std::vector<std::uint64_t> live;
  std::vector<std::uint64_t> hwm;
  std::vector<std::uint64_t> hwm_sharing;
  std::vector<std::uint64_t> hwm_computation;
  std::vector<std::uint64_t> hwm_reconstruction;
  std::vector<std::uint64_t> sent_sharing;
  std::vector<std::uint64_t> sent_computation;
  std::vector<std::uint64_t> sent_reconstruction;
  std::vector<std::uint64_t> received_total;
  std::uint64_t broadcast_bits = 0;

  explicit ResourceLedger(std::size_t n = 0)
      : live(n, 0), hwm(n, 0), hwm_sharing(n, 0), hwm_computation(n, 0),
        hwm_reconstruction(n, 0), sent_sharing(n, 0), sent_computation(n, 0),
        sent_reconstruction(n, 0), received_total(n, 0) {}

  std::uint64_t sent_total(std::size_t node) const {
    return sent_sharing[node] + sent_computation[node] + sent_reconstruction[node];
  }
  std::uint64_t& sent(Phase p, std::size_t node) {
    switch (p) {
      case Phase::Sharing: return sent_sharing[node];
      case Phase::Computation: return sent_computation[node];
      case Phase::Reconstruction: return sent_reconstruction[node];
    }
    return sent_sharing[node];
  }
  std::uint64_t max_hwm() const {
    std::uint64_t m = 0;
    for (auto v : hwm) m = std::max(m, v);
    return m;
  }
  std::uint64_t max_hwm(Phase p) const {
    const auto& v = p == Phase::Sharing       ? hwm_sharing
                    : p == Phase::Computation ? hwm_computation
                                              : hwm_reconstruction;
    std::uint64_t m = 0;
    for (auto x : v) m = std::max(m, x);
    return m;
  }
  std::uint64_t max_sent(Phase p) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < live.size(); ++i) m = std::max(m, sent(p, i));
    return m;
  }
};

// Public randomness source: one seeded stream, every draw logged.
class Beacon {
 public:
  Beacon(std::uint64_t seed, Transcript& tr) : rng_(derive_stream(seed, "beacon")), tr_(&tr) {}

  std::uint64_t draw(std::uint64_t range) {
    const std::uint64_t v = rng_.next_below(range);
    tr_->log(Transcript::Event::BeaconDraw, std::to_string(v) + "/" + std::to_string(range));
    return v;
  }
  int draw_bit() { return static_cast<int>(draw(2)); }

 private:
  Rng rng_;
  Transcript* tr_;
};

// Simulated n-node network: slot bookkeeping with workspace accounting,
// pairwise quantum channels, authenticated broadcast and the beacon.
// The quantum payload of a slot lives in the run's backend driver; the
// network only tracks ownership and resources.
class Network {
 public:
  Network(const NetworkConfig& cfg, Transcript& tr);

  std::size_t n() const { return cfg_.n; }
  const NetworkConfig& config() const { return cfg_; }
  Transcript& transcript() { return *tr_; }
  Beacon& beacon() { return beacon_; }
  ResourceLedger& ledger() { return ledger_; }
  const ResourceLedger& ledger() const { return ledger_; }

  void set_phase(Phase p);
  Phase phase() const { return phase_; }

  // Slot lifecycle; slots are identified by dense ids.
  int alloc_slot(std::size_t node);
  void free_slot(int slot);
  void transfer(int slot, std::size_t to);
  std::size_t owner(int slot) const { return owners_.at(slot); }

  void broadcast(std::size_t node, const BitVec& bits, const std::string& context);

 private:
  void bump(std::size_t node);

  NetworkConfig cfg_;
  Transcript* tr_;
  Beacon beacon_;
  ResourceLedger ledger_;
  Phase phase_ = Phase::Sharing;
  std::vector<std::size_t> owners_;
  std::vector<bool> alive_;
};

}  // namespace mpqc
