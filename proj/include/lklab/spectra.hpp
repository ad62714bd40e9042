#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "lklab/grid.hpp"
#include "lklab/stationary.hpp"

namespace lklab {

// Dense discretizations of the operators linearized at the stationary wave:
// the Schrodinger form L = -D^2/12 + (lambda-1) - log(1+W) and the conjugated
// pencil form S = K^{-1/2} diag(log(1+W)) K^{-1/2} with K = -D^2/12 +
// (lambda-1), optionally low-pass truncated.  D^2 is the spectral second
// derivative, a real symmetric circulant, so K^{-1/2} is exact in Fourier
// space.

enum class OperatorKind { l_lambda, s_sym, s_sym_truncated };

struct OperatorMatrix {
  int dim = 0;
  std::vector<double> entries;  // row-major dim x dim
  bool symmetric = true;
  SpectralGrid grid;
  OperatorKind kind = OperatorKind::l_lambda;
  double lambda = 0.0;

  double& at(int i, int j) { return entries[static_cast<size_t>(i) * dim + j]; }
  double at(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }
};

OperatorMatrix build_L(const StationaryWave& wave);

// cutoff > 0 multiplies both resolvent factors by chi_{|k| <= cutoff} in
// Fourier space; cutoff <= 0 means no truncation
OperatorMatrix build_S_sym(const StationaryWave& wave, double cutoff = 0.0);

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major; column j is the eigenvector of values[j]
};

// full symmetric eigendecomposition (divide and conquer); throws on
// non-convergence
EigenDecomposition eigensystem(const OperatorMatrix& op);

// classification of the spectrum against the expected bound-state structure;
// the designated mode is compared with W'_stat (for L) or K^{1/2} W'_stat
// (for S)
struct SpectralReport {
  OperatorKind kind = OperatorKind::l_lambda;
  double lambda = 0.0;
  double zero_tol = 0.0;         // |eigenvalue| below this counts as zero
  int n_negative = 0;
  int n_zero = 0;
  int n_positive = 0;
  int n_above_one = 0;           // S only: eigenvalues > 1e-6 above 1
  int mult_one = 0;              // S only: eigenvalues within zero_tol of 1
  double min_eigenvalue = 0.0;
  double gap_above_zero = 0.0;   // smallest eigenvalue above zero_tol
  double gap_below_one = 0.0;    // S only: distance of the next eigenvalue below 1
  double alignment = 0.0;        // |cos| of the designated mode vs its reference
  double continuum_floor = 0.0;  // L only: min eigenvalue among delocalized modes
  std::vector<double> eigenvalues;
};

SpectralReport spectral_report(const OperatorMatrix& op, const StationaryWave& wave);

// max over random unit U of ||(S - S_trunc) U||_{L^2}, applied via FFT only
// (no dense matrices); compare against 12 eps^{2-2p} ||W||_sup
double truncation_deviation(const StationaryWave& wave, double cutoff, int trials,
                            uint64_t seed);

}  // namespace lklab
