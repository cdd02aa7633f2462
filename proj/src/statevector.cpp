#include "mpqc/statevector.hpp"

#include <bit>
#include <cmath>

namespace mpqc {

namespace {
// Below this size the OpenMP fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;
KernelMode g_kernel_mode = KernelMode::Parallel;
constexpr double kSnapEps = 1e-12;
}  // namespace

void StateVector::set_kernel_mode(KernelMode m) { g_kernel_mode = m; }
KernelMode StateVector::kernel_mode() { return g_kernel_mode; }

Mat2 cxp_dagger_phase_convention() {
  // e^{i pi/4} * X * P^dagger = [[0, e^{-i pi/4}], [e^{i pi/4}, 0]]
  return Mat2{cplx(0.0, 0.0), std::conj(kEipi4), kEipi4, cplx(0.0, 0.0)};
}

StateVector::StateVector(std::size_t nqubits, std::size_t capacity) : nq_(nqubits), cap_(capacity) {
  if (nqubits > capacity)
    throw CapacityError("statevector register of " + std::to_string(nqubits) +
                        " qubits exceeds capacity " + std::to_string(capacity));
  amp_.assign(std::size_t{1} << nq_, cplx(0.0, 0.0));
  amp_[0] = 1.0;
}

StateVector StateVector::product(const std::vector<std::array<cplx, 2>>& qubits,
                                 std::size_t capacity) {
  StateVector sv(qubits.size(), capacity);
  const std::size_t dim = sv.amp_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    cplx a = 1.0;
    for (std::size_t q = 0; q < qubits.size(); ++q) a *= qubits[q][(i >> q) & 1];
    sv.amp_[i] = a;
  }
  return sv;
}

void StateVector::check_q(std::size_t q) const {
  if (q >= nq_) throw BackendMismatch("qubit index out of range");
}

void StateVector::apply1(std::size_t q, const Mat2& m) {
  check_q(q);
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amp_.size();
  cplx* a = amp_.data();
  const bool par = g_kernel_mode == KernelMode::Parallel && dim >= kParallelThreshold;
  const std::int64_t pairs = static_cast<std::int64_t>(dim >> 1);
#pragma omp parallel for if (par) schedule(static)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const std::size_t i0 =
        ((static_cast<std::size_t>(k) & ~(stride - 1)) << 1) | (static_cast<std::size_t>(k) & (stride - 1));
    const std::size_t i1 = i0 | stride;
    const cplx a0 = a[i0], a1 = a[i1];
    a[i0] = m[0] * a0 + m[1] * a1;
    a[i1] = m[2] * a0 + m[3] * a1;
  }
}

void StateVector::apply_controlled(std::size_t c, std::size_t t, const Mat2& m) {
  check_q(c);
  check_q(t);
  if (c == t) throw BackendMismatch("control equals target");
  const std::size_t cs = std::size_t{1} << c;
  const std::size_t ts = std::size_t{1} << t;
  const std::size_t dim = amp_.size();
  cplx* a = amp_.data();
  const bool par = g_kernel_mode == KernelMode::Parallel && dim >= kParallelThreshold;
  const std::int64_t total = static_cast<std::int64_t>(dim);
#pragma omp parallel for if (par) schedule(static)
  for (std::int64_t ii = 0; ii < total; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    // visit each control-on, target-0 representative once
    if ((i & cs) == 0 || (i & ts) != 0) continue;
    const std::size_t i1 = i | ts;
    const cplx a0 = a[i], a1 = a[i1];
    a[i] = m[0] * a0 + m[1] * a1;
    a[i1] = m[2] * a0 + m[3] * a1;
  }
}

double StateVector::prob_one(std::size_t q) const {
  check_q(q);
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = amp_.size();
  const cplx* a = amp_.data();
  const bool par = g_kernel_mode == KernelMode::Parallel && dim >= kParallelThreshold;
  double p = 0.0;
  const std::int64_t total = static_cast<std::int64_t>(dim);
#pragma omp parallel for if (par) schedule(static) reduction(+ : p)
  for (std::int64_t i = 0; i < total; ++i)
    if (static_cast<std::size_t>(i) & mask) p += std::norm(a[i]);
  // Snap to the exact Clifford probabilities so deterministic outcomes and
  // fair coins are bit-stable across backends.
  if (p < kSnapEps) return 0.0;
  if (p > 1.0 - kSnapEps) return 1.0;
  if (std::abs(p - 0.5) < kSnapEps) return 0.5;
  return p;
}

int StateVector::measure_z(std::size_t q, Rng& rng) {
  const double p1 = prob_one(q);
  const double u = rng.next_double();  // always consumed
  const int outcome = u < p1 ? 1 : 0;
  collapse(q, outcome);
  return outcome;
}

int StateVector::measure_z_parity(const std::vector<std::size_t>& qubits, Rng& rng) {
  std::size_t mask = 0;
  for (auto q : qubits) {
    check_q(q);
    mask |= std::size_t{1} << q;
  }
  double p_odd = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i)
    if (std::popcount(i & mask) & 1) p_odd += std::norm(amp_[i]);
  if (p_odd < kSnapEps) p_odd = 0.0;
  else if (p_odd > 1.0 - kSnapEps) p_odd = 1.0;
  else if (std::abs(p_odd - 0.5) < kSnapEps) p_odd = 0.5;
  const double u = rng.next_double();
  const int outcome = u < p_odd ? 1 : 0;
  double keep = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const bool odd = (std::popcount(i & mask) & 1) != 0;
    if (odd == (outcome == 1))
      keep += std::norm(amp_[i]);
    else
      amp_[i] = 0.0;
  }
  if (keep <= 0.0) throw BackendMismatch("parity collapse onto zero-probability outcome");
  if (std::abs(keep - 1.0) >= kSnapEps) {
    const double f = 1.0 / std::sqrt(keep);
    for (auto& a : amp_) a *= f;
  }
  return outcome;
}

void StateVector::collapse(std::size_t q, int outcome) {
  check_q(q);
  const std::size_t mask = std::size_t{1} << q;
  double keep = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const bool one = (i & mask) != 0;
    if (one == (outcome == 1))
      keep += std::norm(amp_[i]);
    else
      amp_[i] = 0.0;
  }
  if (keep <= 0.0) throw BackendMismatch("collapse onto zero-probability outcome");
  if (std::abs(keep - 1.0) < kSnapEps) return;  // already normalized; avoid drift
  const double f = 1.0 / std::sqrt(keep);
  for (auto& a : amp_) a *= f;
}

void StateVector::drop_qubit(std::size_t q, int outcome) {
  check_q(q);
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t low = mask - 1;
  std::vector<cplx> next(amp_.size() >> 1);
  for (std::size_t i = 0; i < next.size(); ++i) {
    const std::size_t src = ((i & ~low) << 1) | (i & low) | (outcome ? mask : 0);
    next[i] = amp_[src];
  }
  amp_ = std::move(next);
  --nq_;
}

void StateVector::merge(const StateVector& other) {
  if (nq_ + other.nq_ > cap_)
    throw CapacityError("merge would exceed statevector capacity");
  std::vector<cplx> next(std::size_t{1} << (nq_ + other.nq_));
  const std::size_t dim = amp_.size();
  for (std::size_t j = 0; j < other.amp_.size(); ++j) {
    const cplx b = other.amp_[j];
    if (b == cplx(0.0, 0.0)) continue;
    for (std::size_t i = 0; i < dim; ++i) next[(j << nq_) | i] = b * amp_[i];
  }
  amp_ = std::move(next);
  nq_ += other.nq_;
}

void StateVector::swap_qubits(std::size_t a, std::size_t b) {
  check_q(a);
  check_q(b);
  if (a == b) return;
  const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const bool ba = (i & ma) != 0, bb = (i & mb) != 0;
    if (ba == bb) continue;
    if (!ba) {  // visit each pair once
      const std::size_t j = (i | ma) & ~mb;
      std::swap(amp_[i], amp_[j]);
    }
  }
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

double StateVector::fidelity(const StateVector& a, const StateVector& b) {
  if (a.nq_ != b.nq_) throw BackendMismatch("fidelity on different sized registers");
  cplx ip(0.0, 0.0);
  for (std::size_t i = 0; i < a.amp_.size(); ++i) ip += std::conj(a.amp_[i]) * b.amp_[i];
  return std::norm(ip);
}

double StateVector::max_amp_diff(const StateVector& a, const StateVector& b) {
  if (a.nq_ != b.nq_) throw BackendMismatch("amp diff on different sized registers");
  double m = 0.0;
  for (std::size_t i = 0; i < a.amp_.size(); ++i) m = std::max(m, std::abs(a.amp_[i] - b.amp_[i]));
  return m;
}

std::vector<cplx> StateVector::reduced_density(const std::vector<std::size_t>& qubits) const {
  if (qubits.size() > 6) throw BackendMismatch("reduced density limited to 6 qubits");
  const std::size_t m = qubits.size();
  const std::size_t d = std::size_t{1} << m;
  std::vector<cplx> rho(d * d, cplx(0.0, 0.0));
  const std::size_t dim = amp_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (amp_[i] == cplx(0.0, 0.0)) continue;
    std::size_t r = 0;
    for (std::size_t k = 0; k < m; ++k)
      if ((i >> qubits[k]) & 1) r |= std::size_t{1} << k;
    for (std::size_t j = 0; j < dim; ++j) {
      // same configuration on the traced-out qubits
      std::size_t diff = i ^ j;
      for (std::size_t k = 0; k < m; ++k) diff &= ~(std::size_t{1} << qubits[k]);
      if (diff != 0) continue;
      std::size_t c = 0;
      for (std::size_t k = 0; k < m; ++k)
        if ((j >> qubits[k]) & 1) c |= std::size_t{1} << k;
      rho[r * d + c] += amp_[i] * std::conj(amp_[j]);
    }
  }
  return rho;
}

double StateVector::trace_distance(const std::vector<cplx>& rho, const std::vector<cplx>& sigma) {
  // 0.5 * sum of singular values of (rho - sigma); computed via Jacobi
  // eigenvalues of the Hermitian difference.
  if (rho.size() != sigma.size()) throw BackendMismatch("density matrix size mismatch");
  std::size_t d = 1;
  while (d * d < rho.size()) ++d;
  std::vector<cplx> a(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) a[i] = rho[i] - sigma[i];
  // Jacobi sweeps on the Hermitian matrix a.
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += std::norm(a[p * d + q]);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx apq = a[p * d + q];
        if (std::abs(apq) < 1e-18) continue;
        const double app = a[p * d + p].real(), aqq = a[q * d + q].real();
        const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
        const cplx phase = apq / std::abs(apq);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < d; ++k) {
          const cplx akp = a[k * d + p], akq = a[k * d + q];
          a[k * d + p] = c * akp + s * std::conj(phase) * akq;
          a[k * d + q] = -s * phase * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const cplx apk = a[p * d + k], aqk = a[q * d + k];
          a[p * d + k] = c * apk + s * phase * aqk;
          a[q * d + k] = -s * std::conj(phase) * apk + c * aqk;
        }
      }
    }
  }
  double td = 0.0;
  for (std::size_t p = 0; p < d; ++p) td += std::abs(a[p * d + p].real());
  return 0.5 * td;
}

namespace reference {

void apply1(std::vector<cplx>& amp, std::size_t q, const Mat2& m) {
  const std::size_t mask = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amp[i], a1 = amp[i | mask];
    amp[i] = m[0] * a0 + m[1] * a1;
    amp[i | mask] = m[2] * a0 + m[3] * a1;
  }
}

void apply_controlled(std::vector<cplx>& amp, std::size_t c, std::size_t t, const Mat2& m) {
  const std::size_t cm = std::size_t{1} << c, tm = std::size_t{1} << t;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if ((i & cm) == 0 || (i & tm) != 0) continue;
    const cplx a0 = amp[i], a1 = amp[i | tm];
    amp[i] = m[0] * a0 + m[1] * a1;
    amp[i | tm] = m[2] * a0 + m[3] * a1;
  }
}

double prob_one(const std::vector<cplx>& amp, std::size_t q) {
  const std::size_t mask = std::size_t{1} << q;
  double p = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i)
    if (i & mask) p += std::norm(amp[i]);
  return p;
}

}  // namespace reference

}  // namespace mpqc
