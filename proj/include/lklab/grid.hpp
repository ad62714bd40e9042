#pragma once
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lklab {

inline constexpr double kPi = 3.14159265358979323846;

// Uniform periodic grid on [-L, L) with a power-of-two point count, so every
// derivative / shift / projection is a Fourier multiplier.
struct SpectralGrid {
  int n = 0;
  double half_width = 0.0;

  double spacing() const { return 2.0 * half_width / n; }
  double node(int j) const { return -half_width + j * spacing(); }
  int spectrum_size() const { return n / 2 + 1; }
  double wavenumber(int m) const { return kPi * m / half_width; }
  bool operator==(const SpectralGrid&) const = default;

  // smallest power-of-two grid with spacing <= max_spacing
  static SpectralGrid with_spacing(double half_width, double max_spacing, int min_n = 16);
};

enum class Parity { none, even, odd };

// Immutable sampled field; operations return new profiles.
struct WaveProfile {
  SpectralGrid grid;
  std::vector<double> values;
  std::string tag = "w";
  Parity parity = Parity::none;
};

WaveProfile make_profile(const SpectralGrid& g, std::string tag = "w", Parity parity = Parity::none);

// ---- transforms ------------------------------------------------------------
std::vector<std::complex<double>> spectrum(const WaveProfile& p);
WaveProfile from_spectrum(const SpectralGrid& g, std::span<const std::complex<double>> X,
                          std::string tag = "w", Parity parity = Parity::none);

// d^order/dz^order via (ik)^order; odd orders zero the Nyquist mode.
WaveProfile spectral_derivative(const WaveProfile& p, int order);

// symbol of the tent kernel (1-|z|)_+ : 4 sin^2(k/2)/k^2, Taylor-stabilized
// near k = 0 (1 - k^2/12 + k^4/360 - ...).
double hat_symbol(double k);

// convolution with the unit tent; requires spacing <= 0.5 to resolve it.
WaveProfile hat_convolve(const WaveProfile& p);

// band-limited translate f(. - a); the Nyquist mode picks up cos(k a) so the
// result stays real.
WaveProfile band_shift(const WaveProfile& p, double a);

// (low, high) with low = modes |k| <= k_cut and high = f - low pointwise, so
// the two parts sum back to f exactly.
std::pair<WaveProfile, WaveProfile> low_pass_split(const WaveProfile& p, double k_cut);

// band-limited evaluation of the interpolant at an arbitrary point (periodic)
double sample_at(const WaveProfile& p, double x);
std::vector<double> sample_many(const WaveProfile& p, std::span<const double> xs);

// values X(eps*n) for n = n_lo..n_hi (the lattice sampling map)
std::vector<double> sample_lattice(const WaveProfile& p, double eps, int n_lo, int n_hi);

// ---- norms -----------------------------------------------------------------
double sup_norm(std::span<const double> v);
double l2_norm(std::span<const double> v);                  // plain sqrt(sum x^2)
double grid_l2(const WaveProfile& p);                       // sqrt(h * sum x^2)
double grid_h(const WaveProfile& p, double s);              // Sobolev via (1+k^2)^s
double mixed_norm(const WaveProfile& p);                    // max(L2, sup)

// energy fraction carried by modes with |k| >= k_cut
double band_energy_fraction(const WaveProfile& p, double k_cut);

// average the profile with its reflection through z = 0
WaveProfile symmetrize_even(const WaveProfile& p);

// ---- diagnostics -----------------------------------------------------------
namespace diag {
void warn(const std::string& msg);
std::vector<std::string> drain();
}  // namespace diag

}  // namespace lklab
