#include "lklab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace lklab::fft {
namespace {

// FFTW's planner is not thread-safe; executing plans on their own buffers is.
// Each thread keeps its own plans + buffers per size, only creation locks.
std::mutex planner_mutex;

struct PlanPair {
  int n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit PlanPair(int n_) : n(n_) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex);
    fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
  }
  ~PlanPair() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
};

PlanPair& plans_for(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<PlanPair>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanPair>(n)).first;
  return *it->second;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("fft::forward: need at least 2 samples");
  PlanPair& p = plans_for(n);
  std::memcpy(p.real, x.data(), n * sizeof(double));
  fftw_execute(p.fwd);
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (int j = 0; j <= n / 2; ++j) out[j] = {p.cplx[j][0], p.cplx[j][1]};
  return out;
}

std::vector<double> inverse(std::span<const std::complex<double>> X, int n) {
  if (static_cast<int>(X.size()) != n / 2 + 1)
    throw std::invalid_argument("fft::inverse: spectrum size must be n/2 + 1");
  PlanPair& p = plans_for(n);
  for (int j = 0; j <= n / 2; ++j) {
    p.cplx[j][0] = X[j].real();
    p.cplx[j][1] = X[j].imag();
  }
  fftw_execute(p.bwd);
  std::vector<double> out(n);
  const double scale = 1.0 / n;
  for (int j = 0; j < n; ++j) out[j] = p.real[j] * scale;
  return out;
}

}  // namespace lklab::fft
