#pragma once
#include <cmath>
#include <stdexcept>
#include <string>

namespace lklab {

// Model parameters for the precompressed chain near the linear exponent:
// alpha = 1 + epsilon^2, wave speed c^2 = 1 + epsilon^2 * lambda in rescaled
// time, lambda > 1 supersonic.  The `power` family replaces the logarithmic
// flux by w + epsilon^2 w^p (integer p >= 2).
enum class ForceFamily { hertz_log, power };

struct ModelParams {
  double epsilon = 0.1;
  double lambda = 2.0;
  double v0 = 1.0;                 // precompression amplitude, u = -v0 (1 + w)
  double p_split = 2.0 / 3.0;      // Fourier splitting exponent, in (5/8, 6/8)
  double ball_R = 0.0;             // <= 0 means "auto": exp(2 lambda)
  double ball_r = -0.5;            // lower bound tracked for positivity transfer
  ForceFamily family = ForceFamily::hertz_log;
  int power_p = 2;

  double mu() const { return epsilon * epsilon * lambda; }
  double speed() const { return std::sqrt(1.0 + mu()); }
  double kappa() const { return std::sqrt(12.0 * (lambda - 1.0)); }
  double upper_ball() const { return ball_R > 0 ? ball_R : std::exp(2.0 * lambda); }
  // time rescaling t' = v0^{eps^2/2} t that removes v0 from the equations
  double time_scale() const { return std::pow(v0, epsilon * epsilon / 2.0); }
};

namespace detail {
inline void check_strain(double w) {
  if (!(w > -1.0))
    throw std::domain_error("strain w = " + std::to_string(w) + " leaves w > -1");
}
inline double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}
}  // namespace detail

// Force Ṽ'(w) = (1+w)^{1+eps^2} - 1, written through expm1/log1p so the
// near-linear regime w -> 0, eps -> 0 does not lose digits to cancellation.
inline double force(double w, const ModelParams& mp) {
  detail::check_strain(w);
  if (mp.family == ForceFamily::power)
    return w + mp.epsilon * mp.epsilon * detail::ipow(w, mp.power_p);
  return std::expm1((1.0 + mp.epsilon * mp.epsilon) * std::log1p(w));
}

// Potential Ṽ(w) = ((1+w)^{2+eps^2} - 1)/(2+eps^2) - w, so Ṽ(0) = Ṽ'(0) = 0.
inline double potential(double w, const ModelParams& mp) {
  detail::check_strain(w);
  const double e2 = mp.epsilon * mp.epsilon;
  if (mp.family == ForceFamily::power)
    return 0.5 * w * w + e2 * detail::ipow(w, mp.power_p + 1) / (mp.power_p + 1);
  return std::expm1((2.0 + e2) * std::log1p(w)) / (2.0 + e2) - w;
}

// Derivatives Ṽ'', Ṽ''', Ṽ'''' used by the energy decomposition.
inline double force_deriv(double w, int order, const ModelParams& mp) {
  detail::check_strain(w);
  if (order < 2 || order > 4) throw std::invalid_argument("force_deriv: order in {2,3,4}");
  const double e2 = mp.epsilon * mp.epsilon;
  if (mp.family == ForceFamily::power) {
    double c = e2;
    int p = mp.power_p;
    for (int k = 0; k < order - 1; ++k) c *= (p - k);
    double base = (order - 1 > p) ? 0.0 : detail::ipow(w, p - (order - 1));
    return (order == 2 ? 1.0 : 0.0) + c * base;
  }
  const double lp = std::log1p(w);
  switch (order) {
    case 2: return (1.0 + e2) * std::exp(e2 * lp);
    case 3: return e2 * (1.0 + e2) * std::exp((e2 - 1.0) * lp);
    default: return e2 * (e2 - 1.0) * (1.0 + e2) * std::exp((e2 - 2.0) * lp);
  }
}

// g(w) = (1+w) log(1+w) and its first two derivatives; the flux of the
// log-KdV equation with background.
inline double g_log(double w, int order = 0) {
  detail::check_strain(w);
  switch (order) {
    case 0: return (1.0 + w) * std::log1p(w);
    case 1: return 1.0 + std::log1p(w);
    case 2: return 1.0 / (1.0 + w);
    default: throw std::invalid_argument("g_log: order in {0,1,2}");
  }
}

// v log v extended by continuity at v = 0; inputs that underflow the normal
// range evaluate to 0 as well, which keeps far tails exact zeros.
inline double vlogv(double v) {
  if (v < 0.0) throw std::domain_error("vlogv: negative argument");
  if (v < 0x1.0p-1021) return 0.0;
  return v * std::log(v);
}

// N_eps(w) = Ṽ'(w) - w = (1+w) (exp(eps^2 log(1+w)) - 1): the full deviation
// of the force from its linear part.
inline double n_eps(double w, const ModelParams& mp) {
  detail::check_strain(w);
  if (mp.family == ForceFamily::power)
    return mp.epsilon * mp.epsilon * detail::ipow(w, mp.power_p);
  return (1.0 + w) * std::expm1(mp.epsilon * mp.epsilon * std::log1p(w));
}

// M_eps(w) = Ṽ'(w) - w - eps^2 g(w): what remains after peeling off the
// log-KdV flux.  M_eps / eps^4 -> (1+w) log^2(1+w) / 2 as eps -> 0.
inline double m_eps(double w, const ModelParams& mp) {
  detail::check_strain(w);
  if (mp.family == ForceFamily::power) return 0.0;
  const double s = mp.epsilon * mp.epsilon * std::log1p(w);
  return (1.0 + w) * (std::expm1(s) - s);
}

}  // namespace lklab
