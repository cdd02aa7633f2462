// Benchmark: production statevector kernels (OpenMP when enabled) against
// the serial reference loops, plus serial-vs-parallel mode timings.

#include <chrono>
#include <functional>
#include <cstdio>

#include "mpqc/statevector.hpp"

using namespace mpqc;

namespace {

double time_ms(const std::function<void()>& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t nq = argc > 1 ? static_cast<std::size_t>(std::atoi(argv[1])) : 20;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  std::printf("statevector kernels, %zu qubits (%d reps)\n", nq, reps);
  std::printf("%-22s %12s %12s %12s\n", "kernel", "serial ms", "parallel ms", "reference ms");

  StateVector sv(nq);
  std::vector<cplx> ref = sv.amplitudes();

  struct Case {
    const char* name;
    std::function<void(StateVector&)> prod;
    std::function<void(std::vector<cplx>&)> refr;
  };
  const std::vector<Case> cases{
      {"h layer",
       [&](StateVector& s) {
         for (std::size_t q = 0; q < nq; ++q) s.h(q);
       },
       [&](std::vector<cplx>& a) {
         for (std::size_t q = 0; q < nq; ++q) reference::apply1(a, q, kMatH);
       }},
      {"cnot chain",
       [&](StateVector& s) {
         for (std::size_t q = 0; q + 1 < nq; ++q) s.cnot(q, q + 1);
       },
       [&](std::vector<cplx>& a) {
         for (std::size_t q = 0; q + 1 < nq; ++q) reference::apply_controlled(a, q, q + 1, kMatX);
       }},
      {"t layer",
       [&](StateVector& s) {
         for (std::size_t q = 0; q < nq; ++q) s.t(q);
       },
       [&](std::vector<cplx>& a) {
         for (std::size_t q = 0; q < nq; ++q) reference::apply1(a, q, kMatT);
       }},
  };

  for (const auto& c : cases) {
    StateVector::set_kernel_mode(KernelMode::Serial);
    const double serial = time_ms([&] { c.prod(sv); }, reps);
    StateVector::set_kernel_mode(KernelMode::Parallel);
    const double parallel = time_ms([&] { c.prod(sv); }, reps);
    const double refms = time_ms([&] { c.refr(ref); }, reps);
    std::printf("%-22s %12.3f %12.3f %12.3f\n", c.name, serial, parallel, refms);
  }

  // correctness spot check: production path vs reference amplitudes
  StateVector a(12), b(12);
  std::vector<cplx> r = a.amplitudes();
  for (std::size_t q = 0; q < 12; ++q) {
    a.h(q);
    reference::apply1(r, q, kMatH);
  }
  double maxd = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) maxd = std::max(maxd, std::abs(r[i] - a.amplitudes()[i]));
  std::printf("production vs reference max amplitude diff: %.3g\n", maxd);
  return maxd == 0.0 ? 0 : 1;
}
