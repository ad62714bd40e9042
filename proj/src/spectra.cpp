#include "lklab/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

#include "lklab/fft.hpp"
#include "lklab/rng.hpp"

namespace lklab {
namespace {

// first column of the circulant with the given real Fourier symbol
std::vector<double> circulant_column(const SpectralGrid& grid,
                                     const std::function<double(double)>& symbol) {
  std::vector<std::complex<double>> spec(grid.spectrum_size());
  for (int m = 0; m < grid.spectrum_size(); ++m) spec[m] = symbol(grid.wavenumber(m));
  return fft::inverse(spec, grid.n);
}

std::vector<double> apply_symbol(const SpectralGrid& grid, const std::vector<double>& v,
                                 const std::function<double(double)>& symbol) {
  auto spec = fft::forward(v);
  for (int m = 0; m < grid.spectrum_size(); ++m) spec[m] *= symbol(grid.wavenumber(m));
  return fft::inverse(spec, grid.n);
}

void symmetrize(OperatorMatrix& op) {
  for (int i = 0; i < op.dim; ++i)
    for (int j = 0; j < i; ++j) {
      const double s = 0.5 * (op.at(i, j) + op.at(j, i));
      op.at(i, j) = s;
      op.at(j, i) = s;
    }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return std::abs(ab) / std::sqrt(aa * bb);
}

// inverse participation count of a unit vector: ~dim for extended modes,
// ~support width for localized ones
double participation(const double* v, int n) {
  double s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double q = v[i] * v[i];
    s2 += q;
    s4 += q * q;
  }
  return s2 * s2 / s4;
}

}  // namespace

OperatorMatrix build_L(const StationaryWave& wave) {
  const SpectralGrid& grid = wave.profile.grid;
  const int n = grid.n;
  OperatorMatrix op;
  op.dim = n;
  op.grid = grid;
  op.kind = OperatorKind::l_lambda;
  op.lambda = wave.lambda;
  op.entries.assign(static_cast<size_t>(n) * n, 0.0);

  const auto d2 = circulant_column(grid, [](double k) { return -k * k; });
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) op.at(i, j) = -d2[(i - j + n) % n] / 12.0;
  for (int i = 0; i < n; ++i)
    op.at(i, i) += wave.lambda - 1.0 - std::log1p(wave.profile.values[i]);
  symmetrize(op);
  return op;
}

OperatorMatrix build_S_sym(const StationaryWave& wave, double cutoff) {
  const SpectralGrid& grid = wave.profile.grid;
  const int n = grid.n;
  const double lambda = wave.lambda;
  auto resolvent_half = [lambda, cutoff](double k) {
    if (cutoff > 0.0 && std::abs(k) > cutoff) return 0.0;
    return 1.0 / std::sqrt(k * k / 12.0 + lambda - 1.0);
  };

  OperatorMatrix op;
  op.dim = n;
  op.grid = grid;
  op.kind = cutoff > 0.0 ? OperatorKind::s_sym_truncated : OperatorKind::s_sym;
  op.lambda = lambda;
  op.entries.assign(static_cast<size_t>(n) * n, 0.0);

  // column j of R diag(q) R, with R e_j read off the circulant column
  const auto rcol = circulant_column(grid, resolvent_half);
  std::vector<double> q(n), col(n);
  for (int i = 0; i < n; ++i) q[i] = std::log1p(wave.profile.values[i]);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = q[i] * rcol[(i - j + n) % n];
    const auto full = apply_symbol(grid, col, resolvent_half);
    for (int i = 0; i < n; ++i) op.at(i, j) = full[i];
  }
  symmetrize(op);
  return op;
}

EigenDecomposition eigensystem(const OperatorMatrix& op) {
  EigenDecomposition out;
  out.values.resize(op.dim);
  out.vectors = op.entries;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'L', op.dim, out.vectors.data(), op.dim,
                     out.values.data());
  if (info != 0)
    throw std::runtime_error("eigensystem: dsyevd failed with info " +
                             std::to_string(info));
  return out;
}

SpectralReport spectral_report(const OperatorMatrix& op, const StationaryWave& wave) {
  const EigenDecomposition eig = eigensystem(op);
  const int n = op.dim;

  SpectralReport rep;
  rep.kind = op.kind;
  rep.lambda = op.lambda;
  rep.zero_tol = 1e-6 * (op.lambda - 1.0);
  rep.eigenvalues = eig.values;
  rep.min_eigenvalue = eig.values.front();

  std::vector<double> column(n);
  auto fetch = [&](int j) {
    for (int i = 0; i < n; ++i) column[i] = eig.vectors[static_cast<size_t>(i) * n + j];
  };

  const WaveProfile dW = spectral_derivative(wave.profile, 1);
  if (op.kind == OperatorKind::l_lambda) {
    rep.gap_above_zero = 0.0;
    int zero_index = -1;
    double best = std::numeric_limits<double>::max();
    for (int j = 0; j < n; ++j) {
      const double e = eig.values[j];
      if (e < -rep.zero_tol)
        ++rep.n_negative;
      else if (e <= rep.zero_tol)
        ++rep.n_zero;
      else if (rep.gap_above_zero == 0.0)
        rep.gap_above_zero = e;
      if (std::abs(e) < best) {
        best = std::abs(e);
        zero_index = j;
      }
    }
    fetch(zero_index);
    rep.alignment = cosine(column, dW.values);

    rep.continuum_floor = std::numeric_limits<double>::max();
    for (int j = 0; j < n; ++j) {
      fetch(j);
      if (participation(column.data(), n) > n / 8.0)
        rep.continuum_floor = std::min(rep.continuum_floor, eig.values[j]);
    }
  } else {
    // compare the mode at 1 with K^{1/2} W'_stat
    const double lambda = op.lambda;
    const std::vector<double> ref = apply_symbol(
        op.grid, dW.values, [lambda](double k) { return std::sqrt(k * k / 12.0 + lambda - 1.0); });
    const double tol = 1e-6;
    int one_index = -1;
    double best = std::numeric_limits<double>::max();
    for (int j = 0; j < n; ++j) {
      const double mu = eig.values[j];
      if (mu < -rep.zero_tol) ++rep.n_negative;
      if (std::abs(mu) <= rep.zero_tol) ++rep.n_zero;
      if (mu > 1.0 + tol) ++rep.n_above_one;
      if (std::abs(mu - 1.0) <= tol) ++rep.mult_one;
      if (mu < 1.0 - tol)
        rep.gap_below_one = std::min(1.0 - mu, rep.gap_below_one == 0.0
                                                   ? std::numeric_limits<double>::max()
                                                   : rep.gap_below_one);
      if (std::abs(mu - 1.0) < best) {
        best = std::abs(mu - 1.0);
        one_index = j;
      }
    }
    fetch(one_index);
    rep.alignment = cosine(column, ref);
  }
  rep.n_positive = n - rep.n_negative - rep.n_zero;
  return rep;
}

double truncation_deviation(const StationaryWave& wave, double cutoff, int trials,
                            uint64_t seed) {
  const SpectralGrid& grid = wave.profile.grid;
  const int n = grid.n;
  const double lambda = wave.lambda;
  auto rfull = [lambda](double k) { return 1.0 / std::sqrt(k * k / 12.0 + lambda - 1.0); };
  auto rtrunc = [lambda, cutoff](double k) {
    if (cutoff > 0.0 && std::abs(k) > cutoff) return 0.0;
    return 1.0 / std::sqrt(k * k / 12.0 + lambda - 1.0);
  };
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = std::log1p(wave.profile.values[i]);

  auto apply = [&](const std::vector<double>& u, auto&& symbol) {
    auto mid = apply_symbol(grid, u, symbol);
    for (int i = 0; i < n; ++i) mid[i] *= q[i];
    return apply_symbol(grid, mid, symbol);
  };

  CounterRng rng{seed, 7};
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> u(n);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      u[i] = rng.normal(static_cast<uint64_t>(t) * n + i);
      norm += u[i] * u[i];
    }
    norm = std::sqrt(grid.spacing() * norm);
    for (auto& x : u) x /= norm;
    const auto a = apply(u, rfull);
    const auto b = apply(u, rtrunc);
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev += (a[i] - b[i]) * (a[i] - b[i]);
    worst = std::max(worst, std::sqrt(grid.spacing() * dev));
  }
  return worst;
}

}  // namespace lklab
