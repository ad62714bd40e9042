#include "lklab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "lklab/fft.hpp"

namespace lklab {

SpectralGrid SpectralGrid::with_spacing(double half_width, double max_spacing, int min_n) {
  if (!(half_width > 0) || !(max_spacing > 0))
    throw std::invalid_argument("SpectralGrid: half_width and spacing must be positive");
  int n = min_n;
  while (2.0 * half_width / n > max_spacing) n *= 2;
  return SpectralGrid{n, half_width};
}

WaveProfile make_profile(const SpectralGrid& g, std::string tag, Parity parity) {
  if (g.n < 16 || (g.n & (g.n - 1)) != 0)
    throw std::invalid_argument("WaveProfile: grid size must be a power of two >= 16");
  WaveProfile p;
  p.grid = g;
  p.values.assign(g.n, 0.0);
  p.tag = std::move(tag);
  p.parity = parity;
  return p;
}

std::vector<std::complex<double>> spectrum(const WaveProfile& p) {
  return fft::forward(p.values);
}

WaveProfile from_spectrum(const SpectralGrid& g, std::span<const std::complex<double>> X,
                          std::string tag, Parity parity) {
  WaveProfile out;
  out.grid = g;
  out.values = fft::inverse(X, g.n);
  out.tag = std::move(tag);
  out.parity = parity;
  return out;
}

WaveProfile spectral_derivative(const WaveProfile& p, int order) {
  if (order < 0) throw std::invalid_argument("spectral_derivative: order >= 0");
  if (order == 0) return p;
  auto X = spectrum(p);
  const int half = p.grid.n / 2;
  for (int m = 0; m <= half; ++m) {
    const double k = p.grid.wavenumber(m);
    std::complex<double> ik(0.0, k);
    std::complex<double> mult = 1.0;
    for (int j = 0; j < order; ++j) mult *= ik;
    X[m] *= mult;
  }
  if (order % 2 == 1) X[half] = 0.0;  // no real odd-derivative at Nyquist
  // warn if the derivative is not resolved: top 1/8 of the band carrying
  // more than 1e-8 of the energy means the profile is too rough for `order`
  double tail = 0, tot = 0;
  for (int m = 0; m <= half; ++m) {
    double w = (m == 0 || m == half) ? 1.0 : 2.0;
    double e = w * std::norm(X[m]);
    tot += e;
    if (m >= half - half / 8) tail += e;
  }
  if (tot > 0 && tail / tot > 1e-8)
    diag::warn("spectral_derivative: order " + std::to_string(order) +
               " has Nyquist-band energy fraction " + std::to_string(tail / tot));
  Parity parity = p.parity;
  if (order % 2 == 1) {
    if (parity == Parity::even) parity = Parity::odd;
    else if (parity == Parity::odd) parity = Parity::even;
  }
  return from_spectrum(p.grid, X, p.tag, parity);
}

double hat_symbol(double k) {
  const double a = std::abs(k);
  if (a < 1e-4) {
    const double k2 = k * k;
    return 1.0 - k2 / 12.0 + k2 * k2 / 360.0;
  }
  const double s = std::sin(0.5 * k);
  return 4.0 * s * s / (k * k);
}

WaveProfile hat_convolve(const WaveProfile& p) {
  if (p.grid.spacing() > 0.5)
    throw std::invalid_argument("hat_convolve: spacing must resolve the unit kernel (h <= 0.5)");
  auto X = spectrum(p);
  for (int m = 0; m <= p.grid.n / 2; ++m) X[m] *= hat_symbol(p.grid.wavenumber(m));
  return from_spectrum(p.grid, X, p.tag, p.parity);
}

WaveProfile band_shift(const WaveProfile& p, double a) {
  if (a == 0.0) return p;
  auto X = spectrum(p);
  const int half = p.grid.n / 2;
  for (int m = 0; m < half; ++m) {
    const double k = p.grid.wavenumber(m);
    X[m] *= std::complex<double>(std::cos(k * a), -std::sin(k * a));
  }
  X[half] *= std::cos(p.grid.wavenumber(half) * a);
  return from_spectrum(p.grid, X, p.tag, a == 0.0 ? p.parity : Parity::none);
}

std::pair<WaveProfile, WaveProfile> low_pass_split(const WaveProfile& p, double k_cut) {
  auto X = spectrum(p);
  for (int m = 0; m <= p.grid.n / 2; ++m)
    if (p.grid.wavenumber(m) > k_cut) X[m] = 0.0;
  WaveProfile low = from_spectrum(p.grid, X, p.tag, p.parity);
  WaveProfile high = p;
  for (int j = 0; j < p.grid.n; ++j) high.values[j] -= low.values[j];
  return {std::move(low), std::move(high)};
}

double sample_at(const WaveProfile& p, double x) {
  return sample_many(p, std::span<const double>(&x, 1))[0];
}

std::vector<double> sample_many(const WaveProfile& p, std::span<const double> xs) {
  const auto X = spectrum(p);
  const int n = p.grid.n;
  const int half = n / 2;
  const double L = p.grid.half_width;
  std::vector<double> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    // evaluate sum_m X_m exp(i m pi (x+L)/L) / n with an incremental rotation
    const double phi = kPi * (xs[i] + L) / L;
    const std::complex<double> rot(std::cos(phi), std::sin(phi));
    std::complex<double> e = rot;
    double acc = X[0].real();
    for (int m = 1; m < half; ++m) {
      acc += 2.0 * (X[m].real() * e.real() - X[m].imag() * e.imag());
      e *= rot;
    }
    acc += X[half].real() * e.real();  // Nyquist as cosine
    out[i] = acc / n;
  }
  return out;
}

std::vector<double> sample_lattice(const WaveProfile& p, double eps, int n_lo, int n_hi) {
  if (n_hi < n_lo) throw std::invalid_argument("sample_lattice: empty range");
  std::vector<double> xs(n_hi - n_lo + 1);
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) xs[i] = eps * (n_lo + i);
  return sample_many(p, xs);
}

double sup_norm(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l2_norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double grid_l2(const WaveProfile& p) {
  return std::sqrt(p.grid.spacing()) * l2_norm(p.values);
}

double grid_h(const WaveProfile& p, double s) {
  const auto X = spectrum(p);
  const int half = p.grid.n / 2;
  double acc = 0;
  for (int m = 0; m <= half; ++m) {
    const double k = p.grid.wavenumber(m);
    const double w = (m == 0 || m == half) ? 1.0 : 2.0;
    acc += w * std::pow(1.0 + k * k, s) * std::norm(X[m]);
  }
  const double n = p.grid.n;
  return std::sqrt(acc * 2.0 * p.grid.half_width / (n * n));
}

double mixed_norm(const WaveProfile& p) {
  return std::max(grid_l2(p), sup_norm(p.values));
}

double band_energy_fraction(const WaveProfile& p, double k_cut) {
  const auto X = spectrum(p);
  const int half = p.grid.n / 2;
  double tail = 0, tot = 0;
  for (int m = 0; m <= half; ++m) {
    const double w = (m == 0 || m == half) ? 1.0 : 2.0;
    const double e = w * std::norm(X[m]);
    tot += e;
    if (p.grid.wavenumber(m) >= k_cut) tail += e;
  }
  return tot > 0 ? tail / tot : 0.0;
}

WaveProfile symmetrize_even(const WaveProfile& p) {
  WaveProfile out = p;
  const int n = p.grid.n;
  for (int j = 0; j < n; ++j) {
    const int jr = (n - j) % n;
    out.values[j] = 0.5 * (p.values[j] + p.values[jr]);
  }
  out.parity = Parity::even;
  return out;
}

namespace diag {
namespace {
std::mutex mu;
std::vector<std::string> messages;
}  // namespace

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lock(mu);
  if (messages.size() < 1000) messages.push_back(msg);
}

std::vector<std::string> drain() {
  std::lock_guard<std::mutex> lock(mu);
  auto out = std::move(messages);
  messages.clear();
  return out;
}
}  // namespace diag

}  // namespace lklab
