#include "lklab/stationary.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

#include "lklab/nonlinear.hpp"

namespace lklab {
namespace {

constexpr double kTailThreshold = 1e-13;

double g0(double w) { return g_log(w, 0); }

using State = std::array<double, 2>;

// The turning point is a saddle-to-saddle shot: integrating away from the
// maximum amplifies rounding by exp(kappa x) and the tail is unreachable in
// doubles.  Going the other way, from a point on the stable manifold (the
// linear tail ansatz) backward toward the maximum, transverse errors decay,
// so the profile is recovered to full precision up to a translation.  Pass 1
// locates the translation (the W' = 0 event), pass 2 samples the nodes.
struct BackwardShot {
  double x_turn = 0.0;    // frame coordinate of the maximum (negative)
  double w_turn = 0.0;    // amplitude there
  double e_drift = 0.0;   // first-integral drift along the path
};

template <typename Observer>
BackwardShot backward_pass(double lambda, double w_tail, double x_limit, Observer&& observe) {
  namespace odeint = boost::numeric::odeint;
  auto rhs = [lambda](const State& y, State& dy, double) {
    dy[0] = y[1];
    dy[1] = 12.0 * (lambda * y[0] - g0(y[0]));
  };
  const double kappa = std::sqrt(12.0 * (lambda - 1.0));
  auto stepper = odeint::make_dense_output(1e-12, 1e-12, odeint::runge_kutta_dopri5<State>());
  State y{w_tail, -kappa * w_tail};
  stepper.initialize(y, 0.0, -1e-3);

  BackwardShot shot;
  while (true) {
    stepper.do_step(rhs);
    const double t0 = stepper.previous_time();  // larger (we move left)
    const double t1 = stepper.current_time();
    const State& yc = stepper.current_state();
    shot.e_drift = std::max(shot.e_drift,
                            std::abs(first_integral(yc[0], yc[1], lambda) + 0.25));
    if (yc[1] >= 0.0) {
      // the maximum lies inside this step; bisect for W' = 0
      double lo = t1, hi = t0;  // W'(lo) >= 0, W'(hi) < 0
      State yi;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, yi);
        (yi[1] >= 0.0 ? lo : hi) = mid;
      }
      shot.x_turn = 0.5 * (lo + hi);
      stepper.calc_state(shot.x_turn, yi);
      shot.w_turn = yi[0];
      observe(stepper, std::max(t1, shot.x_turn), t0);
      return shot;
    }
    observe(stepper, t1, t0);
    if (t1 < -x_limit)
      throw std::runtime_error("solve_stationary: no turning point inside the grid span");
  }
}

}  // namespace

double first_integral(double W, double Wp, double lambda) {
  const double one = 1.0 + W;
  return Wp * Wp / 24.0 + 0.5 * one * one * std::log1p(W) - 0.25 * one * one -
         0.5 * lambda * W * W;
}

double turning_point(double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("turning_point: lambda > 1 required");
  auto phi = [lambda](double W) { return first_integral(W, 0.0, lambda) + 0.25; };
  // scan for the sign change; phi < 0 on (0, W0), > 0 beyond
  const double hi_limit = std::exp(2.0 * lambda);
  double lo = 0.0, hi = 0.0;
  const int scan = 4096;
  for (int i = 1; i <= scan; ++i) {
    double W = hi_limit * i / scan;
    if (phi(W) > 0.0) {
      hi = W;
      lo = hi_limit * (i - 1) / scan;
      break;
    }
  }
  if (hi == 0.0) throw std::runtime_error("turning_point: no sign change up to exp(2 lambda)");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SpectralGrid default_x_grid(double lambda) {
  const double kappa = std::sqrt(12.0 * (lambda - 1.0));
  return SpectralGrid{2048, std::max(20.0, 12.0 / kappa)};
}

StationaryWave solve_stationary(double lambda, const SpectralGrid& grid) {
  StationaryWave out;
  out.lambda = lambda;
  out.turning_value = turning_point(lambda);
  out.decay_rate = std::sqrt(12.0 * (lambda - 1.0));

  const double w_tail = kTailThreshold;
  const double x_limit = grid.half_width + 1.0;

  // pass 1: find the frame offset of the maximum
  const BackwardShot shot =
      backward_pass(lambda, w_tail, x_limit, [](auto&, double, double) {});
  out.matching_x = -shot.x_turn;
  out.first_integral_drift = shot.e_drift;

  // pass 2: profile coordinate x = frame - x_turn; fill nodes j h and the
  // decay-fit samples as the steps sweep by
  const int n = grid.n;
  const double h = grid.spacing();
  std::vector<double> right(n / 2 + 1, 0.0);
  int hi_node = std::min(static_cast<int>(std::floor(out.matching_x / h)), n / 2);
  double tail_x = std::floor(out.matching_x / 0.05) * 0.05;
  backward_pass(lambda, w_tail, x_limit,
                [&](auto& stepper, double t1, double t0) {
                  State yi;
                  while (hi_node >= 0 && shot.x_turn + hi_node * h >= t1 - 1e-14) {
                    const double xf = std::min(shot.x_turn + hi_node * h, t0);
                    stepper.calc_state(xf, yi);
                    right[hi_node] = yi[0];
                    --hi_node;
                  }
                  while (tail_x >= 0 && shot.x_turn + tail_x >= t1 - 1e-14) {
                    const double xf = std::min(shot.x_turn + tail_x, t0);
                    stepper.calc_state(xf, yi);
                    out.tail_samples.emplace_back(tail_x, yi[0]);
                    tail_x -= 0.05;
                  }
                });
  if (hi_node >= 0)
    throw std::runtime_error("solve_stationary: node fill incomplete");
  right[0] = shot.w_turn;

  // exponential continuation beyond the matching point
  const double amp = w_tail * std::exp(out.decay_rate * out.matching_x);
  for (int j = std::min(static_cast<int>(std::floor(out.matching_x / h)), n / 2) + 1;
       j <= n / 2; ++j)
    right[j] = amp * std::exp(-out.decay_rate * j * h);

  WaveProfile prof = make_profile(grid, "W", Parity::even);
  for (int j = 0; j <= n / 2; ++j) prof.values[(n / 2 + j) % n] = right[j];
  for (int j = 1; j < n / 2; ++j) prof.values[n / 2 - j] = right[j];
  out.profile = std::move(prof);

  const WaveProfile d2 = spectral_derivative(out.profile, 2);
  double res = 0.0;
  for (int j = 0; j < n; ++j) {
    const double W = out.profile.values[j];
    res = std::max(res, std::abs(lambda * W - d2.values[j] / 12.0 - g0(W)));
  }
  out.residual_sup = res;
  std::reverse(out.tail_samples.begin(), out.tail_samples.end());
  return out;
}

double fit_tail_slope(const StationaryWave& wave) {
  // Fit where the amplitude is far into the linear regime (slope corrections
  // are O(W)) yet still well above the integrator tolerance floor near the
  // tail anchor, where samples of order 1e-12 carry O(1) relative error.
  const double w_lo = 1e-8;
  const double w_hi = 1e-4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (auto [x, W] : wave.tail_samples) {
    if (W < w_lo || W > w_hi) continue;
    const double y = std::log(W);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 2) throw std::runtime_error("fit_tail_slope: not enough tail samples");
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return -slope;
}

WaveProfile gaussian_profile(const SpectralGrid& grid) {
  WaveProfile p = make_profile(grid, "v", Parity::even);
  const double amp = std::exp(0.5);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.node(j);
    p.values[j] = amp * std::exp(-3.0 * x * x);
  }
  return p;
}

WaveProfile power_soliton(double lambda, int p, const SpectralGrid& grid) {
  if (p < 2) throw std::invalid_argument("power_soliton: p >= 2");
  const double m = 2.0 / (p - 1);
  const double A = std::pow(lambda * (p + 1) / 2.0, 1.0 / (p - 1));
  const double B = std::sqrt(12.0 * lambda) * (p - 1) / 2.0;
  WaveProfile prof = make_profile(grid, "W", Parity::even);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.node(j);
    prof.values[j] = A * std::pow(1.0 / std::cosh(B * x), m);
  }
  return prof;
}

}  // namespace lklab
