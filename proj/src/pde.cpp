#include "lklab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "lklab/nonlinear.hpp"

namespace lklab {
namespace {

using cd = std::complex<double>;

double flux_value(double v, PdeFlux flux, int p) {
  switch (flux) {
    case PdeFlux::background_g:
      return g_log(v);
    case PdeFlux::vlogv:
      // continuous extension through 0; dealiasing roundoff can leave
      // values a hair below zero in the far tail
      return v > 0.0 ? vlogv(v) : 0.0;
    case PdeFlux::power:
      return detail::ipow(v, p);
  }
  throw std::logic_error("unknown flux");
}

void guard(const PdeState& s) {
  double lo = s.profile.values.empty() ? 0.0 : s.profile.values[0];
  for (double v : s.profile.values) {
    if (std::isnan(v)) throw PdeGuardViolation("NaN in PDE state", s);
    lo = std::min(lo, v);
  }
  if (s.flux == PdeFlux::background_g && lo <= -1.0)
    throw PdeGuardViolation("background positivity lost: min W <= -1", s);
  if (s.flux == PdeFlux::vlogv && lo < -1e-10)
    throw PdeGuardViolation("vlogv state went negative", s);
}

// spectrum of the dealiased flux term -(ik/2) F[f(W)] given the state spectrum
struct FluxOp {
  const SpectralGrid grid;
  const PdeFlux flux;
  const int power_p;
  const double k_cut;  // 2/3 of Nyquist

  std::vector<cd> operator()(const std::vector<cd>& spec) const {
    WaveProfile w = from_spectrum(grid, spec);
    for (double& v : w.values) v = flux_value(v, flux, power_p);
    auto fs = spectrum(w);
    const int half = grid.n / 2;
    for (int m = 0; m <= half; ++m) {
      const double k = grid.wavenumber(m);
      fs[m] = (k > k_cut) ? cd(0.0) : fs[m] * cd(0.0, -0.5 * k);
    }
    fs[half] = 0.0;  // odd-order multiplier has no real Nyquist representation
    return fs;
  }
};

}  // namespace

SpectralGrid default_xi_grid() { return SpectralGrid{2048, 20.0}; }

double default_dtau(const SpectralGrid& g) {
  const double h = g.spacing();
  return std::min(0.5 * h * h * h * 24.0, 1e-3);
}

void step_ifrk4(PdeState& s, double dtau) {
  if (!(dtau > 0.0)) throw std::invalid_argument("step_ifrk4: dtau must be positive");
  guard(s);
  const SpectralGrid& g = s.profile.grid;
  const int half = g.n / 2;
  const double k_nyq = g.wavenumber(half);
  const FluxOp nonlin{g, s.flux, s.power_p, (2.0 / 3.0) * k_nyq};

  // integrating-factor phases exp(i k^3 h / 24) for a half and a full step
  auto phase = [&](double h) {
    std::vector<cd> e(half + 1);
    for (int m = 0; m < half; ++m) {
      const double k = g.wavenumber(m);
      e[m] = std::polar(1.0, k * k * k * h / 24.0);
    }
    // the grid cannot represent the Nyquist sine, so the odd-order rotation
    // degenerates there; leave the mode fixed (it is dealiased to ~0 anyway)
    e[half] = 1.0;
    return e;
  };
  const auto e_half = phase(0.5 * dtau);
  const auto e_full = phase(dtau);

  auto mul = [half](const std::vector<cd>& a, const std::vector<cd>& b) {
    std::vector<cd> r(half + 1);
    for (int m = 0; m <= half; ++m) r[m] = a[m] * b[m];
    return r;
  };
  auto axpy = [half](const std::vector<cd>& x, double alpha, const std::vector<cd>& y) {
    std::vector<cd> r(half + 1);
    for (int m = 0; m <= half; ++m) r[m] = x[m] + alpha * y[m];
    return r;
  };

  // a valid entering state can still exit the flux domain inside a substage;
  // surface that as a guard violation at the entering state, not as a leaked
  // nonlinearity error
  const auto u = spectrum(s.profile);
  std::vector<cd> k1, k2, k3, k4;
  try {
    k1 = nonlin(u);
    k2 = nonlin(mul(e_half, axpy(u, 0.5 * dtau, k1)));
    k3 = nonlin(axpy(mul(e_half, u), 0.5 * dtau, k2));
    k4 = nonlin(axpy(mul(e_full, u), dtau, mul(e_half, k3)));
  } catch (const std::domain_error& e) {
    throw PdeGuardViolation(std::string("flux left its domain mid-step: ") + e.what(), s);
  }

  std::vector<cd> next(half + 1);
  for (int m = 0; m <= half; ++m) {
    next[m] = e_full[m] * u[m] +
              (dtau / 6.0) * (e_full[m] * k1[m] + 2.0 * e_half[m] * (k2[m] + k3[m]) + k4[m]);
  }
  s.profile = from_spectrum(g, next, s.profile.tag, Parity::none);
  s.tau += dtau;
  guard(s);
}

std::vector<PdeCheckpoint> evolve(PdeState& s, double tau_end, double dtau,
                                  double checkpoint_dtau,
                                  const std::function<void(const PdeState&)>& observer) {
  if (tau_end < s.tau) throw std::invalid_argument("evolve: tau_end before current tau");
  if (!(checkpoint_dtau > 0.0))
    throw std::invalid_argument("evolve: checkpoint spacing must be positive");
  guard(s);

  std::vector<PdeCheckpoint> cps;
  auto emit = [&] {
    cps.push_back(make_checkpoint(s));
    if (observer) observer(s);
  };
  emit();

  const double tau0 = s.tau;
  double next_cp = tau0 + checkpoint_dtau;
  while (s.tau < tau_end - 1e-15) {
    const double target = std::min(next_cp, tau_end);
    // land exactly on the checkpoint with uniformly sized steps
    const int steps = std::max(1, static_cast<int>(std::ceil((target - s.tau) / dtau - 1e-12)));
    const double h = (target - s.tau) / steps;
    for (int i = 0; i < steps; ++i) step_ifrk4(s, h);
    s.tau = target;  // suppress roundoff accumulation in the clock
    emit();
    next_cp += checkpoint_dtau;
  }
  return cps;
}

std::pair<double, double> conserved_quantities(const PdeState& s) {
  const double h = s.profile.grid.spacing();
  double m = 0.0, q = 0.0;
  for (double v : s.profile.values) {
    m += v;
    q += v * v;
  }
  return {h * m, h * q};
}

double profile_center(const WaveProfile& p) {
  const int n = p.grid.n;
  int jmax = 0;
  for (int j = 1; j < n; ++j)
    if (p.values[j] > p.values[jmax]) jmax = j;
  const double fm = p.values[(jmax - 1 + n) % n];
  const double f0 = p.values[jmax];
  const double fp = p.values[(jmax + 1) % n];
  const double denom = fm - 2.0 * f0 + fp;
  const double off = (std::abs(denom) < 1e-300) ? 0.0 : 0.5 * (fm - fp) / denom;
  return p.grid.node(jmax) + off * p.grid.spacing();
}

PdeCheckpoint make_checkpoint(const PdeState& s) {
  PdeCheckpoint cp;
  cp.tau = s.tau;
  cp.center = profile_center(s.profile);
  auto [m, q] = conserved_quantities(s);
  cp.mass = m;
  cp.l2 = q;
  const auto [lo, hi] = std::minmax_element(s.profile.values.begin(), s.profile.values.end());
  cp.min = *lo;
  cp.max = *hi;
  return cp;
}

}  // namespace lklab
