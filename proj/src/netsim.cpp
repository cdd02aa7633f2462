#include "mpqc/netsim.hpp"

namespace mpqc {

Network::Network(const NetworkConfig& cfg, Transcript& tr)
    : cfg_(cfg), tr_(&tr), beacon_(cfg.seed, tr), ledger_(cfg.n) {
  cfg_.validate();
}

void Network::set_phase(Phase p) {
  phase_ = p;
  tr_->log(Transcript::Event::PhaseMark, phase_name(p));
}

void Network::bump(std::size_t node) {
  ledger_.live[node] += 1;
  ledger_.hwm[node] = std::max(ledger_.hwm[node], ledger_.live[node]);
  auto& phase_hwm = phase_ == Phase::Sharing       ? ledger_.hwm_sharing
                    : phase_ == Phase::Computation ? ledger_.hwm_computation
                                                   : ledger_.hwm_reconstruction;
  phase_hwm[node] = std::max(phase_hwm[node], ledger_.live[node]);
  if (cfg_.workspace_bound && ledger_.live[node] > *cfg_.workspace_bound)
    throw WorkspaceExceeded("node " + std::to_string(node + 1) + " exceeded workspace bound " +
                            std::to_string(*cfg_.workspace_bound));
}

int Network::alloc_slot(std::size_t node) {
  const int id = static_cast<int>(owners_.size());
  owners_.push_back(node);
  alive_.push_back(true);
  bump(node);
  return id;
}

void Network::free_slot(int slot) {
  if (!alive_.at(slot)) return;
  alive_[slot] = false;
  ledger_.live[owners_[slot]] -= 1;
}

void Network::transfer(int slot, std::size_t to) {
  const std::size_t from = owners_.at(slot);
  if (from == to) return;
  ledger_.sent(phase_, from) += 1;
  ledger_.live[from] -= 1;
  owners_[slot] = to;
  ledger_.received_total[to] += 1;
  bump(to);
  tr_->log(Transcript::Event::Send, std::to_string(from + 1) + ">" + std::to_string(to + 1));
}

void Network::broadcast(std::size_t node, const BitVec& bits, const std::string& context) {
  ledger_.broadcast_bits += bits.size();
  tr_->log(Transcript::Event::Broadcast,
           std::to_string(node + 1) + ":" + context + ":" + bits.str());
}

}  // namespace mpqc
