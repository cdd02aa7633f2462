#pragma once

#include <cstddef>
#include <vector>

#include "mpqc/bitvec.hpp"
#include "mpqc/rng.hpp"
#include "mpqc/statevector.hpp"  // UnsupportedGate, shared error types

namespace mpqc {

// Aaronson-Gottesman stabilizer tableau with the destabilizer extension,
// so deterministic measurement outcomes need no Gaussian elimination.
// Clifford-only: C-G and T are rejected.
class Tableau {
 public:
  explicit Tableau(std::size_t nqubits);

  std::size_t num_qubits() const { return n_; }

  void h(std::size_t q);
  void p(std::size_t q);
  void pdg(std::size_t q);
  void x(std::size_t q);
  void y(std::size_t q);
  void z(std::size_t q);
  void cnot(std::size_t c, std::size_t t);

  // One rng draw per call, deterministic outcomes included.
  int measure_z(std::size_t q, Rng& rng);
  // Measures the Pauli observable X^{xs} Z^{zs} (no phase); used for
  // stabilizer syndrome extraction in protocol reconstruction.
  int measure_pauli(const BitVec& xs, const BitVec& zs, Rng& rng);

  // Forces qubit q back to |0>, consuming a measurement draw.
  void reset_to_zero(std::size_t q, Rng& rng);

  // Expectation of the Pauli observable: +1/-1 when it is (up to sign) in
  // the stabilizer group, 0 otherwise. Non-destructive.
  int expectation(const BitVec& xs, const BitVec& zs) const;

  // Stabilizer row as (xs, zs, sign) for inspection/tests.
  struct Row {
    BitVec x, z;
    bool sign;
  };
  Row stabilizer(std::size_t i) const;

  // Valid symplectic basis check: full rank and the destabilizer/stabilizer
  // commutation pattern. Used by tests after random circuits.
  bool check_invariants() const;

 private:
  int do_measure(const BitVec& xs, const BitVec& zs, Rng& rng);
  void rowsum(std::size_t h, std::size_t i);
  // phase exponent contribution (mod 4) of multiplying row i into row h
  static int g_exp(bool xi, bool zi, bool xh, bool zh);
  bool anticommutes(std::size_t row, const BitVec& xs, const BitVec& zs) const;

  std::size_t n_;
  // rows 0..n-1 destabilizers, n..2n-1 stabilizers
  std::vector<BitVec> xs_, zs_;
  std::vector<bool> r_;
};

}  // namespace mpqc
