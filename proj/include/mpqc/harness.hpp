#pragma once

#include <functional>
#include <string>

#include "mpqc/protocols.hpp"

namespace mpqc {

// --- cross-validation ------------------------------------------------------

struct CrossValReport {
  std::size_t cases = 0;
  std::size_t divergences = 0;
  bool ok() const { return divergences == 0; }
};

// Random Clifford+measure circuits on a shared seeded stream, executed on
// the statevector and tableau backends; records must match bit for bit.
CrossValReport cross_validate_clifford(std::size_t circuits, std::size_t max_qubits,
                                       std::uint64_t seed);

// Single-level VQSS share+verify on the frame and statevector backends with
// identical seeds; transcript digests must match.
CrossValReport cross_validate_vqss(std::size_t runs, std::uint64_t seed);

// --- experiment plumbing ----------------------------------------------------

struct ExperimentSpec {
  std::string scenario;  // canned scenario name, or empty for a custom run
  NetworkConfig cfg;
  Circuit circuit;
  std::vector<InputState> inputs;
  std::string adversary = "honest";
  std::set<std::size_t> corrupt;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir;  // empty: no files written
};

struct ExperimentResult {
  bool pass = true;
  std::vector<std::string> lines;   // human-readable findings
  std::string json_report;          // full machine-readable report
  std::string csv;                  // sweep table when applicable
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Canned scenarios (the CLI's --scenario). Returns pass/fail plus report.
ExperimentResult run_scenario(const std::string& name, std::uint64_t seed_base,
                              const std::string& out_dir);
std::vector<std::string> scenario_names();

// --- comparators -------------------------------------------------------------

struct CompareReport {
  std::size_t runs = 0;
  double max_discrepancy = 0.0;   // max |rho_real - rho_ideal| entry
  double max_trace_distance = 0.0;
  double min_fidelity = 1.0;      // tr(rho sigma), exact for pure outputs
  bool all_bottom = true;         // every honest output was the abort flag
  bool bottom_consistent = true;  // aborts always delivered to all outputs
};

// Runs the protocol across seeds and compares the joint output density
// against the ideal oracle on identical inputs. For > t corruption the
// bottom-consistency clause is checked instead of state closeness.
CompareReport compare_real_vs_ideal(const NetworkConfig& base, const Circuit& circuit,
                                    const std::vector<InputState>& inputs,
                                    const std::string& adversary,
                                    const std::set<std::size_t>& corrupt,
                                    const std::vector<std::uint64_t>& seeds);

// --- resource accounting ------------------------------------------------------

struct ResourceRow {
  std::size_t s = 0;
  std::uint64_t sharing_sent_max = 0;      // max over nodes
  std::uint64_t total_sent_max = 0;
  std::uint64_t workspace_hwm = 0;         // max over nodes
  std::uint64_t sharing_formula = 0;       // (n+1) n s^2
  std::uint64_t workspace_formula = 0;     // n^2 + 4n
};

// One honest run per s value on the given circuit; measured ledger numbers
// next to the closed-form bounds.
std::vector<ResourceRow> resource_sweep(const NetworkConfig& base, const Circuit& circuit,
                                        const std::vector<InputState>& inputs,
                                        const std::vector<std::size_t>& s_values);

// Least-squares fit of y on {x, 1}; returns R^2.
double fit_r_squared(const std::vector<double>& x, const std::vector<double>& y);

// --- security budget -----------------------------------------------------------

struct SecurityBudget {
  std::size_t kappa = 0;
  std::string bound;               // "kappa * 2^-Omega(s)" instantiated
  double measured_detection = 0.0; // single-round VMagic detection of |0>
};

SecurityBudget security_budget(std::size_t n, std::size_t s, const Circuit& circuit,
                               std::size_t detection_trials, std::uint64_t seed);

// --- small physical oracles (2-qubit statevector checks) -----------------------

// Gate teleportation identity: both measurement branches map psi to T psi
// up to global phase; returns the worst-case infidelity over branches.
double gtele_branch_infidelity(const std::array<cplx, 2>& psi);

// C-G(|+>|m>) = |+>|m> ; returns the infidelity.
double vmagic_stabilization_infidelity();

// Empirical single-round detection probability of VMagic on a |0> target.
double vmagic_detection_rate(std::size_t trials, std::uint64_t seed);

// Haar-random qubit state from the given stream.
std::array<cplx, 2> haar_state(Rng& rng);

// Max |a - b| over density-matrix entries.
double density_max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace mpqc
