#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpqc/binary_code.hpp"
#include "mpqc/statevector.hpp"

namespace mpqc {

struct DualContainmentViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TransversalityReport {
  bool ok = false;
  std::vector<std::string> reasons;  // one entry per failed clause
  std::size_t logical_x_weight = 0;
  std::size_t logical_z_weight = 0;
};

struct EncGate {
  enum Kind { H, CNOT } kind;
  std::size_t a = 0, b = 0;  // H target, or CNOT control/target
};

enum class LogicalGateName { H, P, CNOT, X, Z, T, CG, MeasZ, MeasX };

struct LogicalGate {
  LogicalGateName name;
  bool transversal;
  std::string physical;  // per-qubit gate, or the subprotocol realizing it
};

// CSS code built from classical codes (V, W) with V* <= W. Measuring the
// code space in the standard basis yields a word of V, in the Fourier basis
// a word of W. Immutable and shared across threads.
class CssCode {
 public:
  static CssCode build(BinaryCode v, BinaryCode w);
  static CssCode steane();  // [[7,1,3]] from V = W = Hamming [7,4,3]

  std::size_t n() const { return n_; }
  std::size_t distance() const { return d_; }
  std::size_t t() const { return d_ == 0 ? 0 : (d_ - 1) / 2; }
  std::size_t logical_count() const { return k_logical_; }

  const BinaryCode& v() const { return v_; }
  const BinaryCode& w() const { return w_; }

  // Generator supports: X-type stabilizers generate W*, Z-type generate V*.
  const BitMatrix& x_stabilizers() const { return x_stab_; }
  const BitMatrix& z_stabilizers() const { return z_stab_; }

  // Minimum-weight logical representatives.
  const BitVec& logical_x() const { return log_x_; }
  const BitVec& logical_z() const { return log_z_; }

  bool transversal_clifford() const { return report_.ok; }
  const TransversalityReport& check_transversal_cliffords() const { return report_; }

  // Transversal P realizes logical P^dagger when the logical weights are
  // 3 mod 4; in that case logical P is applied as per-qubit P^dagger.
  bool logical_p_uses_pdg() const { return p_uses_pdg_; }

  LogicalGate logical_gate(LogicalGateName g) const;

  // Clifford circuit mapping |psi> on wire input_wire(), |0> elsewhere, to
  // the logical encoding across qubits 0..n-1.
  const std::vector<EncGate>& encoding_circuit() const { return enc_; }
  std::size_t input_wire() const { return input_wire_; }

  // Ideal standard-basis measurement words of logical |a| live in
  // a*logical_x + span(x_stabilizers); Fourier-basis words of |a>_X in
  // a*logical_z + span(z_stabilizers).
  const BitMatrix& z_word_basis() const { return x_stab_; }
  const BitMatrix& x_word_basis() const { return z_stab_; }

  // Logical flip carried by a residual error r (a codeword of V for X-type
  // residuals, of W for Z-type).
  int residual_logical_x_flip(const BitVec& residual_x) const { return log_z_.dot(residual_x); }
  int residual_logical_z_flip(const BitVec& residual_z) const { return log_x_.dot(residual_z); }

 private:
  CssCode() = default;
  void synthesize_encoding();
  void run_checker();

  std::size_t n_ = 0, d_ = 0, k_logical_ = 0;
  BinaryCode v_, w_;
  BitMatrix x_stab_, z_stab_;
  BitVec log_x_, log_z_;
  bool p_uses_pdg_ = false;
  TransversalityReport report_;
  std::vector<EncGate> enc_;
  std::size_t input_wire_ = 0;
};

// Statevector helpers used by the single-level protocol mode and the css
// test oracles. `qubits` maps block position -> register qubit.

void sv_encode(StateVector& sv, const CssCode& code, const std::vector<std::size_t>& qubits);
void sv_decode(StateVector& sv, const CssCode& code, const std::vector<std::size_t>& qubits);

struct EcReport {
  std::vector<std::size_t> x_error_positions;  // bit-flip corrections applied
  std::vector<std::size_t> z_error_positions;
  bool too_many_errors = false;
};

// Measures all stabilizer generators projectively, applies the bounded-
// distance correction, and reports what was fixed. Leaves the block encoded.
EcReport sv_error_correct(StateVector& sv, const CssCode& code,
                          const std::vector<std::size_t>& qubits, Rng& rng);

}  // namespace mpqc
