#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mpqc/rng.hpp"

namespace mpqc {

using cplx = std::complex<double>;

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BackendMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedGate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared constants so every code path (backends, oracle, frame logical
// register) multiplies by bit-identical values.
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline const cplx kEipi4{kInvSqrt2, kInvSqrt2};  // e^{i pi/4}

using Mat2 = std::array<cplx, 4>;  // row-major [a b; c d]

// G = e^{i pi/4} X P^dagger. The bare X P^dagger has eigenvalue e^{-i pi/4}
// on the magic state; the phase factor makes |m> a +1 eigenstate exactly.
Mat2 cxp_dagger_phase_convention();

inline const Mat2 kMatH{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
inline const Mat2 kMatP{1.0, 0.0, 0.0, cplx(0.0, 1.0)};
inline const Mat2 kMatPdg{1.0, 0.0, 0.0, cplx(0.0, -1.0)};
inline const Mat2 kMatX{0.0, 1.0, 1.0, 0.0};
inline const Mat2 kMatY{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
inline const Mat2 kMatZ{1.0, 0.0, 0.0, -1.0};
inline const Mat2 kMatT{1.0, 0.0, 0.0, kEipi4};

enum class KernelMode { Serial, Parallel };

// Dense statevector register. Reference oracle for everything else; the
// inner amplitude loops are the data-parallel kernels (OpenMP above a size
// threshold, with KernelMode::Serial forcing the plain loops for testing).
class StateVector {
 public:
  static constexpr std::size_t kDefaultCapacity = 22;

  explicit StateVector(std::size_t nqubits, std::size_t capacity = kDefaultCapacity);
  // Product-state initialization from per-qubit (amp0, amp1) pairs.
  static StateVector product(const std::vector<std::array<cplx, 2>>& qubits,
                             std::size_t capacity = kDefaultCapacity);

  std::size_t num_qubits() const { return nq_; }
  std::size_t capacity() const { return cap_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  void h(std::size_t q) { apply1(q, kMatH); }
  void p(std::size_t q) { apply1(q, kMatP); }
  void pdg(std::size_t q) { apply1(q, kMatPdg); }
  void x(std::size_t q) { apply1(q, kMatX); }
  void y(std::size_t q) { apply1(q, kMatY); }
  void z(std::size_t q) { apply1(q, kMatZ); }
  void t(std::size_t q) { apply1(q, kMatT); }
  void g(std::size_t q) { apply1(q, cxp_dagger_phase_convention()); }
  void cnot(std::size_t c, std::size_t t) { apply_controlled(c, t, kMatX); }
  void cg(std::size_t c, std::size_t t) { apply_controlled(c, t, cxp_dagger_phase_convention()); }

  void apply1(std::size_t q, const Mat2& m);
  void apply_controlled(std::size_t c, std::size_t t, const Mat2& m);

  double prob_one(std::size_t q) const;
  // Consumes exactly one rng draw regardless of determinism, so draw
  // streams stay aligned across backends. Collapses the state.
  int measure_z(std::size_t q, Rng& rng);
  // Projective measurement of the Z-parity observable on the listed qubits
  // (0 means +1 eigenvalue). One rng draw; collapses.
  int measure_z_parity(const std::vector<std::size_t>& qubits, Rng& rng);
  void collapse(std::size_t q, int outcome);
  // Removes a qubit that has been collapsed to |outcome>; later qubits
  // shift down by one index.
  void drop_qubit(std::size_t q, int outcome);

  // Appends the other register's qubits (tensor product).
  void merge(const StateVector& other);
  void swap_qubits(std::size_t a, std::size_t b);

  double norm_sq() const;

  // |<a|b>|^2 for equal-sized registers.
  static double fidelity(const StateVector& a, const StateVector& b);
  // max_i |a_i - b_i|: zero iff bit-identical amplitudes.
  static double max_amp_diff(const StateVector& a, const StateVector& b);

  // Row-major density matrix over the listed qubits (at most 6).
  std::vector<cplx> reduced_density(const std::vector<std::size_t>& qubits) const;
  static double trace_distance(const std::vector<cplx>& rho, const std::vector<cplx>& sigma);

  static void set_kernel_mode(KernelMode m);
  static KernelMode kernel_mode();

 private:
  void check_q(std::size_t q) const;
  std::size_t nq_ = 0;
  std::size_t cap_ = kDefaultCapacity;
  std::vector<cplx> amp_;
};

// Plain serial reference kernels, deliberately naive; tests compare the
// production kernels against these.
namespace reference {
void apply1(std::vector<cplx>& amp, std::size_t q, const Mat2& m);
void apply_controlled(std::vector<cplx>& amp, std::size_t c, std::size_t t, const Mat2& m);
double prob_one(const std::vector<cplx>& amp, std::size_t q);
}  // namespace reference

}  // namespace mpqc
