#include "doctest.h"
#include "lklab/spectra.hpp"

#include <cmath>
#include <vector>

#include "lklab/stationary.hpp"

using namespace lklab;

namespace {

const StationaryWave& cached_wave(double lam, int n = 512) {
  static std::vector<std::pair<std::pair<double, int>, StationaryWave>> cache;
  for (const auto& [key, w] : cache)
    if (key.first == lam && key.second == n) return w;
  SpectralGrid g = default_x_grid(lam);
  g.n = n;
  cache.emplace_back(std::make_pair(lam, n), solve_stationary(lam, g));
  return cache.back().second;
}

}  // namespace

TEST_CASE("bound-state structure of L and S across speeds") {
  for (double lam : {1.5, 2.0, 3.0}) {
    CAPTURE(lam);
    const StationaryWave& wave = cached_wave(lam);

    const SpectralReport l = spectral_report(build_L(wave), wave);
    CHECK(l.n_negative == 1);
    CHECK(l.n_zero == 1);
    CHECK(l.alignment >= 0.999);          // kernel mode tracks the translation W'
    CHECK(l.gap_above_zero > 0.01);
    // on the periodic box the delocalized modes feel the potential well
    // through its box average, which pulls the continuum edge below lambda - 1
    // by about that average; allow a factor-two cushion for higher orders
    double well = 0.0;
    for (double v : wave.profile.values) well += std::log1p(v);
    well *= wave.profile.grid.spacing() / (2.0 * wave.profile.grid.half_width);
    CHECK(l.continuum_floor >= lam - 1.0 - 2.0 * well);
    CHECK(l.continuum_floor <= lam - 1.0 + 0.01);
    CHECK(l.min_eigenvalue < 0.0);

    const SpectralReport s = spectral_report(build_S_sym(wave), wave);
    CHECK(s.n_above_one == 1);
    CHECK(s.mult_one == 1);
    CHECK(s.min_eigenvalue > -1e-6);      // conjugated operator is positive
    CHECK(s.alignment >= 0.999);
    CHECK(s.gap_below_one > 0.0);

    // negative directions of L pair with pencil eigenvalues above 1, and the
    // kernels match
    CHECK(l.n_negative == s.n_above_one);
    CHECK(l.n_zero == s.mult_one);
  }
}

TEST_CASE("eigendecomposition reconstructs the operator") {
  const StationaryWave& wave = cached_wave(2.0, 256);
  const OperatorMatrix op = build_L(wave);
  const EigenDecomposition ed = eigensystem(op);
  REQUIRE(static_cast<int>(ed.values.size()) == op.dim);

  double op_norm = 0.0;
  for (double x : op.entries) op_norm = std::max(op_norm, std::abs(x));
  double err = 0.0;
  for (int i = 0; i < op.dim; ++i)
    for (int j = 0; j < op.dim; ++j) {
      double sum = 0.0;
      for (int m = 0; m < op.dim; ++m)
        sum += ed.vectors[static_cast<size_t>(i) * op.dim + m] * ed.values[m] *
               ed.vectors[static_cast<size_t>(j) * op.dim + m];
      err = std::max(err, std::abs(sum - op.at(i, j)));
    }
  CHECK(err <= 1e-10 * op_norm);

  for (size_t m = 1; m < ed.values.size(); ++m) CHECK(ed.values[m] >= ed.values[m - 1]);
}

TEST_CASE("low-pass truncation deviation shrinks with the cutoff") {
  const StationaryWave& wave = cached_wave(2.0);
  const double d1 = truncation_deviation(wave, 1.0, 5, 123);
  const double d2 = truncation_deviation(wave, 2.0, 5, 123);
  const double d4 = truncation_deviation(wave, 4.0, 5, 123);
  CHECK(d1 > d2);
  CHECK(d2 > d4);
  CHECK(d4 > 0.0);

  // cutoff at (or beyond) the grid band leaves the operator untouched
  const double nyq = kPi / wave.profile.grid.spacing();
  CHECK(truncation_deviation(wave, nyq + 1.0, 3, 7) == 0.0);
}

TEST_CASE("truncation deviation obeys the resolvent-tail bound") {
  const StationaryWave& wave = cached_wave(2.0);
  double wsup = 0.0;
  for (double x : wave.profile.values) wsup = std::max(wsup, std::abs(x));
  for (double eps : {0.1, 0.2}) {
    CAPTURE(eps);
    const double p = 2.0 / 3.0;
    const double cutoff = std::pow(eps, p - 1.0);
    const double dev = truncation_deviation(wave, cutoff, 10, 99);
    CHECK(dev <= 12.0 * std::pow(eps, 2.0 - 2.0 * p) * wsup);
  }
}
