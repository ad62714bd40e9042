#include "lklab/fpu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lklab {
namespace {

constexpr double kHardGuard = -0.95;

void check_sizes(const LatticeState& s) {
  if (s.w.size() != s.p.size() || s.w.empty())
    throw std::invalid_argument("lattice state: w and p must be nonempty and equal length");
}

void check_hard_guard(const LatticeState& s) {
  for (double wn : s.w)
    if (!(wn > kHardGuard))
      throw GuardViolation("strain reached the guard threshold -0.95", s);
}

}  // namespace

LatticeState make_ring(int n_sites) {
  if (n_sites < 4) throw std::invalid_argument("make_ring: need at least 4 sites");
  LatticeState s;
  s.w.assign(n_sites, 0.0);
  s.p.assign(n_sites, 0.0);
  return s;
}

int default_ring_size(const ModelParams& mp) {
  const int covering = static_cast<int>(std::ceil(40.0 / (mp.epsilon * mp.kappa())));
  int n = std::max(4096, covering);
  return n + (n % 2);
}

void rhs(const LatticeState& s, const ModelParams& mp, std::vector<double>& dw,
         std::vector<double>& dp) {
  check_sizes(s);
  const int n = s.n_sites();
  for (double wn : s.w)
    if (!(wn > mp.ball_r))
      throw GuardViolation("strain left the model ball", s);
  dw.resize(n);
  dp.resize(n);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = force(s.w[i], mp);
  for (int i = 0; i < n; ++i) {
    dw[i] = s.p[(i + 1) % n] - s.p[i];
    dp[i] = f[i] - f[(i - 1 + n) % n];
  }
}

void step_strang(LatticeState& s, double dt, const ModelParams& mp) {
  check_sizes(s);
  const int n = s.n_sites();
  const double half = 0.5 * dt;
  for (int i = 0; i < n; ++i) s.w[i] += half * (s.p[(i + 1) % n] - s.p[i]);
  check_hard_guard(s);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = force(s.w[i], mp);
  for (int i = 0; i < n; ++i) s.p[i] += dt * (f[i] - f[(i - 1 + n) % n]);
  for (int i = 0; i < n; ++i) s.w[i] += half * (s.p[(i + 1) % n] - s.p[i]);
  check_hard_guard(s);
  s.t += dt;
}

void step_rk4(LatticeState& s, double dt, const ModelParams& mp) {
  check_sizes(s);
  const int n = s.n_sites();
  std::vector<double> kw1, kp1, kw2, kp2, kw3, kp3, kw4, kp4;
  LatticeState stage = s;
  rhs(s, mp, kw1, kp1);
  for (int i = 0; i < n; ++i) {
    stage.w[i] = s.w[i] + 0.5 * dt * kw1[i];
    stage.p[i] = s.p[i] + 0.5 * dt * kp1[i];
  }
  rhs(stage, mp, kw2, kp2);
  for (int i = 0; i < n; ++i) {
    stage.w[i] = s.w[i] + 0.5 * dt * kw2[i];
    stage.p[i] = s.p[i] + 0.5 * dt * kp2[i];
  }
  rhs(stage, mp, kw3, kp3);
  for (int i = 0; i < n; ++i) {
    stage.w[i] = s.w[i] + dt * kw3[i];
    stage.p[i] = s.p[i] + dt * kp3[i];
  }
  rhs(stage, mp, kw4, kp4);
  const double w6 = dt / 6.0;
  for (int i = 0; i < n; ++i) {
    s.w[i] += w6 * (kw1[i] + 2.0 * kw2[i] + 2.0 * kw3[i] + kw4[i]);
    s.p[i] += w6 * (kp1[i] + 2.0 * kp2[i] + 2.0 * kp3[i] + kp4[i]);
  }
  check_hard_guard(s);
  s.t += dt;
}

double energy(const LatticeState& s, const ModelParams& mp) {
  check_sizes(s);
  double h = 0.0;
  for (int i = 0; i < s.n_sites(); ++i)
    h += 0.5 * s.p[i] * s.p[i] + potential(s.w[i], mp);
  return h;
}

RingReference::RingReference(const TravellingWaveResult& wave, int sites) {
  if (sites < 8 || sites % 2 != 0)
    throw std::invalid_argument("ring reference: site count must be even and >= 8");
  n_sites = sites;
  speed = wave.speed;
  zgrid = SpectralGrid{4 * sites, sites / 2.0};

  // Periodize the solver profiles onto the ring-sized grid. The solver grid
  // is itself periodic, so only samples inside its own half-width are
  // meaningful; outside, the wave has decayed below the tail floor and the
  // embedding is zero.
  const double l_solver = wave.strain.grid.half_width;
  std::vector<int> inside;
  std::vector<double> zs;
  for (int j = 0; j < zgrid.n; ++j) {
    const double z = zgrid.node(j);
    if (std::abs(z) <= l_solver) {
      inside.push_back(j);
      zs.push_back(z);
    }
  }
  const WaveProfile dstrain = spectral_derivative(wave.strain, 1);
  const auto ws = sample_many(wave.strain, zs);
  const auto dws = sample_many(dstrain, zs);
  const auto ps = sample_many(wave.momentum, zs);

  strain_z = make_profile(zgrid, "w_ref");
  dstrain_z = make_profile(zgrid, "dw_ref");
  momentum_z = make_profile(zgrid, "p_ref");
  for (size_t m = 0; m < inside.size(); ++m) {
    strain_z.values[inside[m]] = ws[m];
    dstrain_z.values[inside[m]] = dws[m];
    momentum_z.values[inside[m]] = ps[m];
  }
}

RingReference::Sample RingReference::at_time(double t) const {
  Sample out;
  out.w.resize(n_sites);
  out.p.resize(n_sites);
  out.dw.resize(n_sites);
  const double a = speed * t;
  // site n sits at z = n - N/2, which is ring node 4n on the quarter-spaced grid
  if (a == 0.0) {
    for (int n = 0; n < n_sites; ++n) {
      out.w[n] = strain_z.values[4 * n];
      out.p[n] = momentum_z.values[4 * n];
      out.dw[n] = dstrain_z.values[4 * n];
    }
    return out;
  }
  const WaveProfile ws = band_shift(strain_z, a);
  const WaveProfile ps = band_shift(momentum_z, a);
  const WaveProfile dws = band_shift(dstrain_z, a);
  for (int n = 0; n < n_sites; ++n) {
    out.w[n] = ws.values[4 * n];
    out.p[n] = ps.values[4 * n];
    out.dw[n] = dws.values[4 * n];
  }
  return out;
}

EnergySplit energy_split(const LatticeState& s, const RingReference& ref,
                         const ModelParams& mp) {
  if (s.n_sites() != ref.n_sites)
    throw std::invalid_argument("energy_split: state and reference ring sizes differ");
  return energy_split_at(s, ref.at_time(s.t), mp);
}

EnergySplit energy_split_at(const LatticeState& s, const RingReference::Sample& r,
                            const ModelParams& mp) {
  check_sizes(s);
  if (r.w.size() != s.w.size())
    throw std::invalid_argument("energy_split: sample and state sizes differ");
  EnergySplit es;
  for (int i = 0; i < s.n_sites(); ++i) {
    const double wp = s.w[i] - r.w[i];
    const double pp = s.p[i] - r.p[i];
    es.h0 += 0.5 * r.p[i] * r.p[i] + potential(r.w[i], mp);
    es.h1 += r.p[i] * pp + force(r.w[i], mp) * wp;
    es.h2 += 0.5 * pp * pp + 0.5 * force_deriv(r.w[i], 2, mp) * wp * wp;
    es.norm_w2 += wp * wp;
    es.norm_p2 += pp * pp;
  }
  es.hr = energy(s, mp) - es.h0 - es.h1 - es.h2;
  return es;
}

H1Balance h1_balance_check(const std::vector<LatticeState>& checkpoints,
                           const RingReference& ref, const ModelParams& mp) {
  if (checkpoints.size() < 5)
    throw std::invalid_argument("h1 balance: need at least 5 checkpoints");
  const int mid = static_cast<int>(checkpoints.size()) / 2;
  const int lo = std::min(std::max(mid, 2), static_cast<int>(checkpoints.size()) - 3);
  const double dtc = checkpoints[lo].t - checkpoints[lo - 1].t;
  if (!(dtc > 0.0) || dtc > 0.1 + 1e-12)
    throw std::invalid_argument("h1 balance: checkpoint spacing must be in (0, 0.1]");
  for (int j = lo - 2; j < lo + 2; ++j) {
    const double gap = checkpoints[j + 1].t - checkpoints[j].t;
    if (std::abs(gap - dtc) > 1e-9 * std::max(1.0, std::abs(dtc)))
      throw std::invalid_argument("h1 balance: checkpoints must be equally spaced");
  }

  double h1s[5];
  for (int j = 0; j < 5; ++j)
    h1s[j] = energy_split(checkpoints[lo - 2 + j], ref, mp).h1;

  H1Balance rep;
  rep.t_mid = checkpoints[lo].t;
  rep.dh1_dt = (-h1s[4] + 8.0 * h1s[3] - 8.0 * h1s[1] + h1s[0]) / (12.0 * dtc);

  const auto r = ref.at_time(rep.t_mid);
  const auto& s = checkpoints[lo];
  double quad = 0.0;
  for (int i = 0; i < s.n_sites(); ++i) {
    const double wp = s.w[i] - r.w[i];
    quad += r.dw[i] * force_deriv(r.w[i], 3, mp) * wp * wp;
  }
  rep.quadratic_term = 0.5 * ref.speed * quad;
  rep.residual = rep.dh1_dt - rep.quadratic_term;
  return rep;
}

std::vector<double> to_physical(const LatticeState& s, const ModelParams& mp) {
  check_sizes(s);
  std::vector<double> u(s.w.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = -mp.v0 * (1.0 + s.w[i]);
  return u;
}

}  // namespace lklab
