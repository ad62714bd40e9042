#include "lklab/lattice_wave.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lklab/fft.hpp"
#include "lklab/rng.hpp"

namespace lklab {
namespace {

using Complex = std::complex<double>;

// The inner map contracts like 1 - O(eps^2 lambda), so the iteration count to
// reach 1e-12 grows like eps^-2; the cap has to cover the smallest epsilon in
// the convergence sweeps (about 2e4 iterations at eps = 0.05).
constexpr int kInnerIterationCap = 80000;

// Iterates only need the strain inside the physical domain w > -1 (with
// margin) and below a divergence ceiling; the estimate ball (ball_r,
// upper_ball) is enforced on the final assembled wave, not on intermediate
// Fourier projections, whose sharp-cutoff ringing can undershoot ball_r.
bool within_domain(const std::vector<double>& w, const ModelParams& mp) {
  const double hi = 2.0 * mp.upper_ball();
  for (double x : w)
    if (!(x > -0.95) || !(x < hi)) return false;
  return true;
}

void check_domain(const std::vector<double>& w, const ModelParams& mp, const char* who) {
  if (!within_domain(w, mp))
    throw std::runtime_error(std::string(who) +
                             ": iterate left the physical domain (-0.95, " +
                             std::to_string(2.0 * mp.upper_ball()) + ")");
}

// one application of the full fixed-point map
// A(w) = (1 + eps^2 lambda)^{-1} ifft( Lambda_hat fft(V'(w)) )
std::vector<double> apply_full_map(const SpectralGrid& g, const std::vector<double>& w,
                                   const ModelParams& mp) {
  std::vector<double> t(g.n);
  for (int j = 0; j < g.n; ++j) t[j] = force(w[j], mp);
  auto spec = fft::forward(t);
  const double denom = 1.0 + mp.mu();
  for (int m = 0; m < g.spectrum_size(); ++m)
    spec[m] *= hat_symbol(g.wavenumber(m)) / denom;
  return fft::inverse(spec, g.n);
}

// the even low-frequency block: profiles are parameterized by the real
// coefficients a_m = (-1)^m Re what_m for grid modes with k_m <= cutoff (all
// modes when cutoff covers the band); the (-1)^m compensates the half-period
// offset of the grid origin, so even profiles have exactly real coordinates
struct EvenBlock {
  const SpectralGrid* grid = nullptr;
  std::vector<int> modes;

  static EvenBlock build(const SpectralGrid& g, double cutoff) {
    EvenBlock b;
    b.grid = &g;
    for (int m = 0; m < g.spectrum_size(); ++m)
      if (g.wavenumber(m) <= cutoff) b.modes.push_back(m);
    return b;
  }

  int dim() const { return static_cast<int>(modes.size()); }
  double sign(int i) const { return modes[i] % 2 == 0 ? 1.0 : -1.0; }

  // coordinates -> half spectrum entries
  void insert(const std::vector<double>& a, std::vector<Complex>& spec) const {
    for (int i = 0; i < dim(); ++i) spec[modes[i]] = sign(i) * a[i];
  }
  std::vector<double> extract(const std::vector<Complex>& spec) const {
    std::vector<double> a(dim());
    for (int i = 0; i < dim(); ++i) a[i] = sign(i) * spec[modes[i]].real();
    return a;
  }
};

// residual of the block equation at the given strain: for each block mode l,
// b_l extracts what_l - Lambda_hat (what_l + F[N]_l)/denom
std::vector<double> block_residual(const EvenBlock& block, const std::vector<Complex>& su,
                                   const std::vector<double>& w, const ModelParams& mp) {
  const SpectralGrid& g = *block.grid;
  std::vector<double> nl(g.n);
  for (int j = 0; j < g.n; ++j) nl[j] = n_eps(w[j], mp);
  const auto sn = fft::forward(nl);
  const double denom = 1.0 + mp.mu();
  std::vector<double> b(block.dim());
  for (int i = 0; i < block.dim(); ++i) {
    const int m = block.modes[i];
    const Complex f =
        su[m] - hat_symbol(g.wavenumber(m)) / denom * (su[m] + sn[m]);
    b[i] = block.sign(i) * f.real();
  }
  return b;
}

// dense Jacobian of the block residual with the multiplier frozen at
// nprime = V''(w) - 1; one FFT pair per column
Eigen::MatrixXd block_jacobian(const EvenBlock& block, const std::vector<double>& nprime,
                               const ModelParams& mp) {
  const SpectralGrid& g = *block.grid;
  const int dim = block.dim();
  const double denom = 1.0 + mp.mu();
  Eigen::MatrixXd jac(dim, dim);
  std::vector<Complex> unit(g.spectrum_size(), 0.0);
  std::vector<double> t(g.n);
  for (int c = 0; c < dim; ++c) {
    unit[block.modes[c]] = block.sign(c);
    const auto basis = fft::inverse(unit, g.n);
    unit[block.modes[c]] = 0.0;
    for (int j = 0; j < g.n; ++j) t[j] = basis[j] * (1.0 + nprime[j]);
    const auto st = fft::forward(t);
    const auto sb = fft::forward(basis);
    for (int r = 0; r < dim; ++r) {
      const int m = block.modes[r];
      const Complex f = sb[m] - hat_symbol(g.wavenumber(m)) / denom * st[m];
      jac(r, c) = block.sign(r) * f.real();
    }
  }
  return jac;
}

std::vector<double> solve_block(const Eigen::MatrixXd& jac, const std::vector<double>& b,
                                const char* who) {
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), b.size());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
  Eigen::VectorXd x = lu.solve(-rhs);
  const double check = (jac * x + rhs).norm();
  if (!(check <= 1e-8 * rhs.norm() + 1e-13))
    throw std::runtime_error(std::string(who) + ": singular block Jacobian");
  return {x.data(), x.data() + x.size()};
}

double coeff_step_norm(const SpectralGrid& g, const EvenBlock& block,
                       const std::vector<double>& step) {
  // Parseval: grid L2 of the profile the coefficient step generates
  double s = 0.0;
  for (int i = 0; i < block.dim(); ++i) {
    const int m = block.modes[i];
    const double weight = (m == 0 || m == g.n / 2) ? 1.0 : 2.0;
    s += weight * step[i] * step[i];
  }
  return std::sqrt(g.spacing() * s / g.n);
}

WaveProfile inner_core(const WaveProfile& u, const WaveProfile& v0, const ModelParams& mp,
                       double cutoff, double tol, int max_iter, InnerStats* stats) {
  const SpectralGrid& g = u.grid;
  const double denom = 1.0 + mp.mu();

  WaveProfile v = v0;
  std::vector<double> w(g.n), nl(g.n);
  double prev_diff = 0.0;
  int consecutive_bad = 0;
  for (int it = 1; it <= max_iter; ++it) {
    for (int j = 0; j < g.n; ++j) w[j] = u.values[j] + v.values[j];
    check_domain(w, mp, "inner_contraction");
    for (int j = 0; j < g.n; ++j) nl[j] = n_eps(w[j], mp);
    auto sv = fft::forward(v.values);
    const auto sn = fft::forward(nl);
    for (int m = 0; m < g.spectrum_size(); ++m) {
      const double k = g.wavenumber(m);
      sv[m] = k > cutoff ? hat_symbol(k) / denom * (sv[m] + sn[m]) : 0.0;
    }
    const auto next = fft::inverse(sv, g.n);
    double diff2 = 0.0;
    for (int j = 0; j < g.n; ++j) {
      const double d = next[j] - v.values[j];
      diff2 += d * d;
    }
    const double diff = std::sqrt(g.spacing() * diff2);
    v.values = next;
    bool stagnated = false;
    if (it > 1) {
      const double ratio = prev_diff > 0.0 ? diff / prev_diff : 0.0;
      consecutive_bad = ratio >= 1.0 ? consecutive_bad + 1 : 0;
      if (consecutive_bad >= 3) {
        // near the rounding floor the step size just rattles; only a rattle
        // far above the tolerance means the map genuinely stopped contracting
        if (diff > 10.0 * tol)
          throw std::runtime_error("inner_contraction: not contracting (ratio >= 1)");
        stagnated = true;
      }
      if (stats) stats->last_ratio = ratio;
    }
    prev_diff = diff;
    if (stats) stats->iterations = it;
    if (diff <= tol || stagnated) {
      v = symmetrize_even(v);
      if (stats) {
        const double nu = grid_l2(u);
        const double scale = std::pow(mp.epsilon, 2.0 - 2.0 * mp.p_split);
        stats->constant = nu > 0.0 ? grid_l2(v) / (scale * nu) : 0.0;
      }
      return v;
    }
  }
  throw std::runtime_error("inner_contraction: no convergence in " +
                           std::to_string(max_iter) + " iterations");
}

struct OuterSolve {
  WaveProfile u;
  WaveProfile v;
  StationaryWave stationary;
  OuterStats stats;
};

// sample the stationary profile (or its derivative) at x = eps z over the
// moving-frame grid
std::vector<double> sample_scaled(const WaveProfile& xprof, const SpectralGrid& zgrid,
                                  double eps) {
  std::vector<double> xs(zgrid.n);
  for (int j = 0; j < zgrid.n; ++j) xs[j] = eps * zgrid.node(j);
  return sample_many(xprof, xs);
}

OuterSolve run_outer(const ModelParams& mp, double cutoff, const SpectralGrid& grid,
                     double tol, int max_iter) {
  OuterSolve out;
  out.stationary = solve_stationary(mp.lambda, default_x_grid(mp.lambda));

  WaveProfile w_eps = make_profile(grid, "w", Parity::even);
  w_eps.values = sample_scaled(out.stationary.profile, grid, mp.epsilon);
  w_eps = symmetrize_even(w_eps);
  auto [w_app, rest] = low_pass_split(w_eps, cutoff);

  const EvenBlock block = EvenBlock::build(grid, cutoff);
  out.stats.block_dim = block.dim();

  std::vector<Complex> spec_u(grid.spectrum_size(), 0.0);
  {
    const auto raw = spectrum(w_app);
    std::vector<double> a = block.extract(raw);
    block.insert(a, spec_u);
  }
  WaveProfile u = from_spectrum(grid, spec_u, "u", Parity::even);
  WaveProfile v = make_profile(grid, "v", Parity::even);

  {
    InnerStats istats;
    v = inner_core(u, v, mp, cutoff, 1e-12, kInnerIterationCap, &istats);
    out.stats.inner_iterations += istats.iterations;
    out.stats.inner = istats;
  }

  std::vector<double> w(grid.n), nprime(grid.n);
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    for (int j = 0; j < grid.n; ++j) w[j] = u.values[j] + v.values[j];
    std::vector<double> b = block_residual(block, spec_u, w, mp);
    double bnorm = l2_norm(b);
    out.stats.block_residual = bnorm;

    for (int j = 0; j < grid.n; ++j) nprime[j] = force_deriv(w[j], 2, mp) - 1.0;
    const Eigen::MatrixXd jac = block_jacobian(block, nprime, mp);
    const std::vector<double> step = solve_block(jac, b, "outer_newton");

    // The line search has to judge a trial u at the high band it induces, not
    // at the stale one: near the band split the contraction is close to
    // critical and v reacts to u with an O(1) gain, so a residual evaluated
    // at the old v accepts steps the coupled system then undoes (a limit
    // cycle in practice). A trial whose inner re-solve fails (domain exit or
    // lost contraction) is likewise just a rejected step.
    std::vector<double> a = block.extract(spec_u);
    double alpha = 1.0;
    std::vector<double> a_try(a.size());
    for (int halving = 0; halving <= 8; ++halving) {
      for (size_t i = 0; i < a.size(); ++i) a_try[i] = a[i] + alpha * step[i];
      std::vector<Complex> spec_try(grid.spectrum_size(), 0.0);
      block.insert(a_try, spec_try);
      WaveProfile u_try = from_spectrum(grid, spec_try, "u", Parity::even);
      std::vector<double> w_try(grid.n);
      for (int j = 0; j < grid.n; ++j) w_try[j] = u_try.values[j] + v.values[j];
      if (within_domain(w_try, mp)) {
        bool inner_ok = true;
        WaveProfile v_try = v;
        InnerStats istats;
        try {
          v_try = inner_core(u_try, v, mp, cutoff, 1e-12, kInnerIterationCap, &istats);
        } catch (const std::runtime_error&) {
          inner_ok = false;
        }
        out.stats.inner_iterations += istats.iterations;
        if (inner_ok) {
          for (int j = 0; j < grid.n; ++j) w_try[j] = u_try.values[j] + v_try.values[j];
          const double bnorm_try = l2_norm(block_residual(block, spec_try, w_try, mp));
          if (bnorm_try < bnorm || bnorm_try <= tol) {
            spec_u = std::move(spec_try);
            u = std::move(u_try);
            v = std::move(v_try);
            out.stats.inner = istats;
            break;
          }
        }
      }
      if (halving == 8)
        throw std::runtime_error("outer_newton: damping failed to reduce the residual");
      alpha *= 0.5;
    }
    out.stats.outer_iterations = it;
    if (alpha * coeff_step_norm(grid, block, step) <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("outer_newton: no convergence in " +
                             std::to_string(max_iter) + " outer iterations");

  // polish the high band once the low block has settled, so the assembled
  // fixed-point residual sits well under the reporting threshold
  InnerStats istats;
  v = inner_core(u, v, mp, cutoff, 1e-14, kInnerIterationCap, &istats);
  out.stats.inner_iterations += istats.iterations;
  out.stats.inner = istats;
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

double antisym_fraction_of(const WaveProfile& p) {
  const int n = p.grid.n;
  double asym = 0.0, total = 0.0;
  for (int j = 0; j < n; ++j) {
    const int mirror = (n - j) % n;
    const double a = 0.5 * (p.values[j] - p.values[mirror]);
    asym += a * a;
    total += p.values[j] * p.values[j];
  }
  return total > 0.0 ? std::sqrt(asym / total) : 0.0;
}

}  // namespace

SpectralGrid default_z_grid(const ModelParams& mp) {
  double need = 64.0;
  if (mp.epsilon > 0.0)
    need = std::max(need, 40.0 / (mp.epsilon * mp.kappa()));
  double half = 64.0;
  while (half < need) half *= 2.0;
  return SpectralGrid{static_cast<int>(8.0 * half), half};  // spacing 1/4
}

WaveProfile inner_contraction(const WaveProfile& u, const ModelParams& mp, double cutoff,
                              double tol, int max_iter, InnerStats* stats) {
  const WaveProfile v0 = make_profile(u.grid, "v", Parity::even);
  return inner_core(u, v0, mp, cutoff, tol, max_iter, stats);
}

WaveProfile outer_newton(const ModelParams& mp, double cutoff, const SpectralGrid& grid,
                         double tol, int max_iter, OuterStats* stats) {
  OuterSolve sol = run_outer(mp, cutoff, grid, tol, max_iter);
  if (stats) *stats = sol.stats;
  return sol.u;
}

double outer_coupling_norm(const ModelParams& mp, const SpectralGrid& grid) {
  const StationaryWave stat = solve_stationary(mp.lambda, default_x_grid(mp.lambda));
  WaveProfile w_eps = make_profile(grid, "w", Parity::even);
  w_eps.values = sample_scaled(stat.profile, grid, mp.epsilon);
  w_eps = symmetrize_even(w_eps);
  const double cutoff = std::pow(mp.epsilon, mp.p_split);
  auto [w_app, rest] = low_pass_split(w_eps, cutoff);

  const WaveProfile v = inner_contraction(w_app, mp, cutoff);
  const int n = grid.n;
  std::vector<double> dn(n);
  for (int j = 0; j < n; ++j)
    dn[j] = n_eps(w_app.values[j] + v.values[j], mp) - n_eps(w_app.values[j], mp);
  auto spec = fft::forward(dn);
  const double denom = 1.0 + mp.mu();
  for (int m = 0; m < grid.spectrum_size(); ++m) {
    const double k = grid.wavenumber(m);
    spec[m] = k <= cutoff ? hat_symbol(k) / denom * spec[m] : 0.0;
  }
  WaveProfile h = make_profile(grid, "h");
  h.values = fft::inverse(spec, n);
  return grid_l2(h);
}

TravellingWaveResult solve_travelling_wave(const ModelParams& mp,
                                           const SpectralGrid& grid) {
  if (!(mp.epsilon > 0.0 && mp.epsilon <= 0.25))
    throw std::invalid_argument("solve_travelling_wave: eps in (0, 0.25] required");
  if (!(mp.lambda > 1.0))
    throw std::invalid_argument("solve_travelling_wave: lambda > 1 required");

  // the quasi-Newton outer loop ignores the v(u) coupling, so it converges
  // linearly with a rate that degrades as epsilon grows; 0.2 needs around a
  // hundred rounds
  const double cutoff = std::pow(mp.epsilon, mp.p_split);
  OuterSolve sol = run_outer(mp, cutoff, grid, 1e-10, 200);

  TravellingWaveResult res;
  res.params = mp;
  res.speed = mp.speed();
  res.strain = make_profile(grid, "w", Parity::even);
  for (int j = 0; j < grid.n; ++j)
    res.strain.values[j] = sol.u.values[j] + sol.v.values[j];
  res.strain = symmetrize_even(res.strain);

  const auto mapped = apply_full_map(grid, res.strain.values, mp);
  double rsup = 0.0;
  for (int j = 0; j < grid.n; ++j)
    rsup = std::max(rsup, std::abs(res.strain.values[j] - mapped[j]));
  res.residual_norm = rsup;

  res.momentum = momentum_from_strain(res.strain, res.speed);

  const auto w_ref = sample_scaled(sol.stationary.profile, grid, mp.epsilon);
  const WaveProfile dx_stat = spectral_derivative(sol.stationary.profile, 1);
  const auto dw_ref = sample_scaled(dx_stat, grid, mp.epsilon);
  const WaveProfile dz = spectral_derivative(res.strain, 1);
  double e0 = 0.0, e1 = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    e0 = std::max(e0, std::abs(res.strain.values[j] - w_ref[j]));
    e1 = std::max(e1, std::abs(dz.values[j] - mp.epsilon * dw_ref[j]));
  }
  res.approx_error = {e0, e1};

  res.inner_iterations = sol.stats.inner_iterations;
  res.outer_iterations = sol.stats.outer_iterations;
  res.block_dim = sol.stats.block_dim;
  res.inner_constant = sol.stats.inner.constant;
  res.u_scaled_l2 = grid_l2(sol.u) * std::sqrt(mp.epsilon);
  res.min_strain = *std::min_element(res.strain.values.begin(), res.strain.values.end());
  res.max_strain = *std::max_element(res.strain.values.begin(), res.strain.values.end());
  res.antisym_fraction = antisym_fraction_of(res.strain);

  if (!(res.min_strain > mp.ball_r) || !(res.max_strain < mp.upper_ball()))
    throw std::runtime_error("solve_travelling_wave: solution violates the a priori ball");
  return res;
}

TravellingWaveResult solve_travelling_wave(const ModelParams& mp) {
  return solve_travelling_wave(mp, default_z_grid(mp));
}

WaveProfile full_newton_oracle(const ModelParams& mp, const SpectralGrid& grid, double tol,
                               const std::optional<WaveProfile>& initial_guess) {
  const EvenBlock block = EvenBlock::build(grid, 2.0 * kPi / grid.spacing());  // all modes

  WaveProfile u = make_profile(grid, "w", Parity::even);
  if (initial_guess) {
    if (!(initial_guess->grid == grid))
      throw std::invalid_argument("full_newton_oracle: initial guess grid mismatch");
    u.values = initial_guess->values;
    u = symmetrize_even(u);
  } else if (mp.epsilon > 0.0) {
    const StationaryWave stat = solve_stationary(mp.lambda, default_x_grid(mp.lambda));
    u.values = sample_scaled(stat.profile, grid, mp.epsilon);
    u = symmetrize_even(u);
  }

  std::vector<Complex> spec_u(grid.spectrum_size(), 0.0);
  {
    const auto raw = spectrum(u);
    const std::vector<double> a = block.extract(raw);
    block.insert(a, spec_u);
    u = from_spectrum(grid, spec_u, "w", Parity::even);
  }

  const bool degenerate = mp.epsilon == 0.0;
  std::vector<double> nprime(grid.n);
  for (int it = 1; it <= 50; ++it) {
    const auto mapped = apply_full_map(grid, u.values, mp);
    double rsup = 0.0;
    for (int j = 0; j < grid.n; ++j)
      rsup = std::max(rsup, std::abs(u.values[j] - mapped[j]));
    if (rsup <= tol) return u;

    std::vector<double> b = block_residual(block, spec_u, u.values, mp);
    for (int j = 0; j < grid.n; ++j) nprime[j] = force_deriv(u.values[j], 2, mp) - 1.0;
    Eigen::MatrixXd jac = block_jacobian(block, nprime, mp);
    if (degenerate) {
      // eps = 0 makes the mean equation 0 = 0; pin it to select the decaying
      // branch
      jac.row(0).setZero();
      jac(0, 0) = 1.0;
      b[0] = block.extract(spec_u)[0];
    }
    const std::vector<double> step = solve_block(jac, b, "full_newton_oracle");

    std::vector<double> a = block.extract(spec_u);
    const double bnorm = l2_norm(b);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 8; ++halving) {
      std::vector<double> a_try(a.size());
      for (size_t i = 0; i < a.size(); ++i) a_try[i] = a[i] + alpha * step[i];
      std::vector<Complex> spec_try(grid.spectrum_size(), 0.0);
      block.insert(a_try, spec_try);
      WaveProfile u_try = from_spectrum(grid, spec_try, "w", Parity::even);
      if (within_domain(u_try.values, mp)) {
        std::vector<double> b_try = block_residual(block, spec_try, u_try.values, mp);
        if (degenerate) b_try[0] = a_try[0];
        if (l2_norm(b_try) < bnorm || l2_norm(b_try) <= tol) {
          spec_u = std::move(spec_try);
          u = std::move(u_try);
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error("full_newton_oracle: damping failed to reduce residual");
  }
  throw std::runtime_error("full_newton_oracle: no convergence in 50 damped steps");
}

WaveProfile momentum_from_strain(const WaveProfile& strain, double c) {
  const SpectralGrid& g = strain.grid;
  auto spec = spectrum(strain);
  for (int m = 0; m < g.spectrum_size(); ++m) {
    const double k = g.wavenumber(m);
    if (m == 0) {
      spec[m] = -c * spec[m];
      continue;
    }
    // e^{ik} - 1 without cancellation; drop the exact zeros at k = 2 pi j
    const double s2 = std::sin(0.5 * k);
    const Complex shift(-2.0 * s2 * s2, std::sin(k));
    if (std::abs(shift) < 1e-8) {
      spec[m] = 0.0;
      continue;
    }
    spec[m] = -c * Complex(0.0, k) * spec[m] / shift;
  }
  WaveProfile p = from_spectrum(g, spec, "p");
  return p;
}

SmallSolutionReport small_solution_check(double lambda, double R, double eps, int trials,
                                         uint64_t seed) {
  SmallSolutionReport rep;
  rep.trials = trials;
  rep.predicted_ratio = (1.0 + eps * eps) * (1.0 + eps * eps * std::log1p(R)) /
                        (1.0 + eps * eps * lambda);

  ModelParams mp;
  mp.epsilon = eps;
  mp.lambda = lambda;
  const SpectralGrid grid{512, 64.0};

  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng{seed, static_cast<uint64_t>(trial)};
    WaveProfile noise = make_profile(grid, "w0");
    for (int j = 0; j < grid.n; ++j) noise.values[j] = rng.normal(j);
    auto [smooth, rest] = low_pass_split(noise, 1.0);
    for (auto& x : smooth.values) x = std::abs(x);
    const double scale = 0.9 * R / mixed_norm(smooth);
    for (auto& x : smooth.values) x *= scale;

    std::vector<double> w = smooth.values;
    double prev = mixed_norm(smooth);
    bool converged = false;
    for (int it = 1; it <= 500; ++it) {
      w = apply_full_map(grid, w, mp);
      WaveProfile cur = make_profile(grid, "w");
      cur.values = w;
      const double norm = mixed_norm(cur);
      if (it > 10 && prev > 1e-11)
        rep.worst_ratio = std::max(rep.worst_ratio, norm / prev);
      prev = norm;
      rep.max_iterations_used = std::max(rep.max_iterations_used, it);
      if (norm <= 1e-12) {
        converged = true;
        rep.worst_final_norm = std::max(rep.worst_final_norm, norm);
        break;
      }
    }
    if (!converged) {
      rep.all_converged = false;
      rep.worst_final_norm = std::max(rep.worst_final_norm, prev);
    }
  }
  return rep;
}

}  // namespace lklab
