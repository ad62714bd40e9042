#include "doctest.h"
#include "lklab/grid.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace lklab;

namespace {

// band-limited test field: a few low harmonics of the periodic domain
WaveProfile harmonics(const SpectralGrid& g) {
  WaveProfile p = make_profile(g, "f");
  const double k1 = kPi / g.half_width;
  for (int j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    p.values[j] = 1.5 + std::cos(k1 * x) - 0.4 * std::sin(3.0 * k1 * x) +
                  0.25 * std::cos(7.0 * k1 * x);
  }
  return p;
}

}  // namespace

TEST_CASE("grid geometry and spacing constructor") {
  const SpectralGrid g{256, 32.0};
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.node(0) == -32.0);
  CHECK(g.node(128) == doctest::Approx(0.0));
  CHECK(g.spectrum_size() == 129);
  CHECK(g.wavenumber(1) == doctest::Approx(kPi / 32.0));

  const SpectralGrid h = SpectralGrid::with_spacing(20.0, 0.3);
  CHECK(h.half_width == 20.0);
  CHECK(h.spacing() <= 0.3);
  CHECK((h.n & (h.n - 1)) == 0);
  CHECK(SpectralGrid::with_spacing(20.0, 2.0 * h.spacing()).n == h.n / 2);
}

TEST_CASE("spectrum round-trip is exact and Parseval holds") {
  const SpectralGrid g{128, 16.0};
  const WaveProfile p = harmonics(g);
  const auto X = spectrum(p);
  const WaveProfile q = from_spectrum(g, X, p.tag, p.parity);
  for (int j = 0; j < g.n; ++j)
    CHECK(q.values[j] == doctest::Approx(p.values[j]).epsilon(1e-14));

  double direct = 0.0;
  for (double v : p.values) direct += v * v;
  double parseval = std::norm(X[0]);
  for (int m = 1; m < g.n / 2; ++m) parseval += 2.0 * std::norm(X[m]);
  parseval += std::norm(X[g.n / 2]);
  CHECK(parseval / g.n == doctest::Approx(direct).epsilon(1e-13));
  CHECK(grid_l2(p) == doctest::Approx(std::sqrt(g.spacing() * direct)).epsilon(1e-14));
}

TEST_CASE("spectral derivative is exact on harmonics") {
  const SpectralGrid g{128, 16.0};
  const double k = 3.0 * kPi / g.half_width;
  WaveProfile p = make_profile(g);
  for (int j = 0; j < g.n; ++j) p.values[j] = std::sin(k * g.node(j));
  const WaveProfile d1 = spectral_derivative(p, 1);
  const WaveProfile d3 = spectral_derivative(p, 3);
  for (int j = 0; j < g.n; ++j) {
    CHECK(d1.values[j] == doctest::Approx(k * std::cos(k * g.node(j))).epsilon(1e-12));
    CHECK(d3.values[j] ==
          doctest::Approx(-k * k * k * std::cos(k * g.node(j))).epsilon(1e-12));
  }
  p.parity = Parity::odd;
  CHECK(spectral_derivative(p, 1).parity == Parity::even);
  CHECK(spectral_derivative(p, 2).parity == Parity::odd);
}

TEST_CASE("band shift translates band-limited data exactly") {
  const SpectralGrid g{128, 16.0};
  const WaveProfile p = harmonics(g);
  const double a = 0.77;
  const WaveProfile s = band_shift(p, a);
  const double k1 = kPi / g.half_width;
  for (int j = 0; j < g.n; ++j) {
    const double x = g.node(j) - a;
    const double want = 1.5 + std::cos(k1 * x) - 0.4 * std::sin(3.0 * k1 * x) +
                        0.25 * std::cos(7.0 * k1 * x);
    CHECK(s.values[j] == doctest::Approx(want).epsilon(1e-12));
  }

  // shifting by zero must be the identity bitwise, not an FFT round-trip
  const WaveProfile z = band_shift(p, 0.0);
  for (int j = 0; j < g.n; ++j) CHECK(z.values[j] == p.values[j]);

  // forward then backward returns within roundoff
  const WaveProfile back = band_shift(s, -a);
  for (int j = 0; j < g.n; ++j)
    CHECK(back.values[j] == doctest::Approx(p.values[j]).epsilon(1e-12));
}

TEST_CASE("low-pass split partitions energy and sums back exactly") {
  const SpectralGrid g{128, 16.0};
  const WaveProfile p = harmonics(g);
  const double k1 = kPi / g.half_width;
  const auto [low, high] = low_pass_split(p, 4.0 * k1);
  for (int j = 0; j < g.n; ++j) {
    CHECK(low.values[j] + high.values[j] == doctest::Approx(p.values[j]).epsilon(1e-14));
    const double x = g.node(j);
    const double want_low = 1.5 + std::cos(k1 * x) - 0.4 * std::sin(3.0 * k1 * x);
    CHECK(low.values[j] == doctest::Approx(want_low).epsilon(1e-12));
  }
  CHECK(band_energy_fraction(low, 4.0 * k1 + 1e-9) == doctest::Approx(0.0));
  CHECK(band_energy_fraction(high, 4.0 * k1) == doctest::Approx(1.0));
  CHECK(band_energy_fraction(make_profile(g), 1.0) == 0.0);
}

TEST_CASE("band-limited sampling reproduces the interpolant off-grid") {
  const SpectralGrid g{128, 16.0};
  const WaveProfile p = harmonics(g);
  const double k1 = kPi / g.half_width;
  auto f = [&](double x) {
    return 1.5 + std::cos(k1 * x) - 0.4 * std::sin(3.0 * k1 * x) +
           0.25 * std::cos(7.0 * k1 * x);
  };
  for (double x : {0.0, 0.1234, -5.6789, 15.999, -16.0, 31.5}) {
    CHECK(sample_at(p, x) == doctest::Approx(f(x)).epsilon(1e-12));
  }
  // lattice sampling map agrees with pointwise sampling
  const auto vals = sample_lattice(p, 0.31, -10, 10);
  REQUIRE(vals.size() == 21);
  for (int n = -10; n <= 10; ++n)
    CHECK(vals[n + 10] == doctest::Approx(f(0.31 * n)).epsilon(1e-12));
  // on-grid nodes reproduce stored values
  CHECK(sample_at(p, g.node(37)) == doctest::Approx(p.values[37]).epsilon(1e-13));
}

TEST_CASE("tent kernel symbol and convolution") {
  CHECK(hat_symbol(0.0) == 1.0);
  const double k = 0.5;
  const double s = std::sin(0.25);
  CHECK(hat_symbol(k) == doctest::Approx(4.0 * s * s / (k * k)).epsilon(1e-15));
  // continuity across the Taylor switch at |k| = 1e-4
  CHECK(hat_symbol(1.0000001e-4) == doctest::Approx(hat_symbol(0.9999999e-4)).epsilon(1e-12));

  // hat * e^{ikx} = hat_symbol(k) e^{ikx}
  const SpectralGrid g{128, 16.0};
  const double kh = 5.0 * kPi / g.half_width;
  WaveProfile p = make_profile(g);
  for (int j = 0; j < g.n; ++j) p.values[j] = std::cos(kh * g.node(j));
  const WaveProfile c = hat_convolve(p);
  for (int j = 0; j < g.n; ++j)
    CHECK(c.values[j] ==
          doctest::Approx(hat_symbol(kh) * std::cos(kh * g.node(j))).epsilon(1e-12));
  const SpectralGrid coarse{16, 16.0};
  CHECK_THROWS_AS(hat_convolve(make_profile(coarse)), std::invalid_argument);
}

TEST_CASE("norms and even symmetrization") {
  const SpectralGrid g{64, 8.0};
  WaveProfile p = make_profile(g);
  for (int j = 0; j < g.n; ++j) p.values[j] = std::exp(-g.node(j) * g.node(j));

  CHECK(sup_norm(p.values) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mixed_norm(p) == std::max(grid_l2(p), sup_norm(p.values)));
  // H^0 equals the grid L^2 norm
  CHECK(grid_h(p, 0.0) == doctest::Approx(grid_l2(p)).epsilon(1e-12));
  CHECK(grid_h(p, 1.0) > grid_h(p, 0.0));

  WaveProfile q = p;
  q.values[3] += 0.5;  // break evenness
  const WaveProfile s = symmetrize_even(q);
  CHECK(s.parity == Parity::even);
  for (int j = 0; j < g.n; ++j) {
    const int jr = (g.n - j) % g.n;
    CHECK(s.values[j] == doctest::Approx(s.values[jr]).epsilon(1e-15));
  }
}
