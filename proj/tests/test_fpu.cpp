#include "doctest.h"
#include "lklab/fpu.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "lklab/rng.hpp"

using namespace lklab;

namespace {

ModelParams params(double eps = 0.1, double lambda = 2.0) {
  ModelParams mp;
  mp.epsilon = eps;
  mp.lambda = lambda;
  return mp;
}

LatticeState bump_state(int n, double amp, double width) {
  LatticeState s = make_ring(n);
  for (int i = 0; i < n; ++i) {
    const double x = i - 0.5 * n;
    s.w[i] = amp * std::exp(-x * x / (width * width));
  }
  return s;
}

LatticeState random_state(int n, double amp, uint64_t seed) {
  LatticeState s = make_ring(n);
  CounterRng rng{seed, 0};
  for (int i = 0; i < n; ++i) {
    s.w[i] = amp * rng.normal(i);
    s.p[i] = amp * rng.normal(n + i);
  }
  return s;
}

double state_dist(const LatticeState& a, const LatticeState& b) {
  double d2 = 0.0;
  for (int i = 0; i < a.n_sites(); ++i) {
    const double dw = a.w[i] - b.w[i];
    const double dp = a.p[i] - b.p[i];
    d2 += dw * dw + dp * dp;
  }
  return std::sqrt(d2);
}

}  // namespace

TEST_CASE("vector field: fixed points and single-site transfer") {
  const ModelParams mp = params();
  LatticeState s = make_ring(16);
  std::vector<double> dw, dp;

  rhs(s, mp, dw, dp);
  for (int i = 0; i < 16; ++i) {
    CHECK(dw[i] == 0.0);
    CHECK(dp[i] == 0.0);
  }

  // uniform strain is an equilibrium of the strain dynamics
  for (auto& x : s.w) x = 0.25;
  rhs(s, mp, dw, dp);
  for (int i = 0; i < 16; ++i) {
    CHECK(dw[i] == 0.0);
    CHECK(dp[i] == 0.0);
  }

  // a single momentum spike drives the two adjacent strains
  s = make_ring(16);
  s.p[3] = 1.0;
  rhs(s, mp, dw, dp);
  CHECK(dw[2] == 1.0);   // dw_2 = p_3 - p_2
  CHECK(dw[3] == -1.0);  // dw_3 = p_4 - p_3
  for (int i = 0; i < 16; ++i)
    if (i != 2 && i != 3) CHECK(dw[i] == 0.0);
}

TEST_CASE("vector field telescopes: total strain and momentum are conserved") {
  // amplitude well under ball_r / 3: a 128-site normal draw stays inside the
  // strain guard with room for its tails
  const ModelParams mp = params(0.15);
  const LatticeState s = random_state(128, 0.1, 7);
  std::vector<double> dw, dp;
  rhs(s, mp, dw, dp);
  CHECK(std::abs(std::accumulate(dw.begin(), dw.end(), 0.0)) <= 1e-13);
  CHECK(std::abs(std::accumulate(dp.begin(), dp.end(), 0.0)) <= 1e-13);

  LatticeState evolved = s;
  for (int i = 0; i < 200; ++i) step_strang(evolved, 0.05, mp);
  const double sw0 = std::accumulate(s.w.begin(), s.w.end(), 0.0);
  const double sp0 = std::accumulate(s.p.begin(), s.p.end(), 0.0);
  const double sw1 = std::accumulate(evolved.w.begin(), evolved.w.end(), 0.0);
  const double sp1 = std::accumulate(evolved.p.begin(), evolved.p.end(), 0.0);
  CHECK(std::abs(sw1 - sw0) <= 1e-12 * 128);
  CHECK(std::abs(sp1 - sp0) <= 1e-12 * 128);
  CHECK(evolved.t == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("splitting step converges at second order") {
  const ModelParams mp = params();
  auto integrate = [&](double dt) {
    LatticeState s = bump_state(64, 0.4, 6.0);
    const int steps = static_cast<int>(std::round(1.0 / dt));
    for (int i = 0; i < steps; ++i) step_strang(s, dt, mp);
    return s;
  };
  LatticeState ref = bump_state(64, 0.4, 6.0);
  for (int i = 0; i < 20000; ++i) step_rk4(ref, 5e-5, mp);

  const double e1 = state_dist(integrate(0.02), ref);
  const double e2 = state_dist(integrate(0.01), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("integrator reproduces the lattice dispersion relation") {
  const ModelParams mp = params(0.1);
  const int n = 64;
  const double k = 2.0 * kPi * 5.0 / n;
  const double om = 2.0 * std::sqrt(1.0 + mp.epsilon * mp.epsilon) * std::sin(0.5 * k);
  const double a = 1e-6;

  auto exact = [&](double t) {
    LatticeState s = make_ring(n);
    for (int i = 0; i < n; ++i) {
      s.w[i] = a * std::cos(k * i - om * t);
      s.p[i] = -a * std::sqrt(1.0 + mp.epsilon * mp.epsilon) *
               std::cos(k * i - om * t - 0.5 * k);
    }
    s.t = t;
    return s;
  };

  LatticeState s = exact(0.0);
  for (int i = 0; i < 1000; ++i) step_rk4(s, 0.01, mp);
  CHECK(state_dist(s, exact(10.0)) <= 1e-4 * a * std::sqrt(2.0 * n));
}

TEST_CASE("splitting and rk4 agree on a smooth pulse") {
  const ModelParams mp = params();
  LatticeState a = bump_state(256, 0.1, 8.0);
  LatticeState b = a;
  for (int i = 0; i < 10000; ++i) step_strang(a, 0.01, mp);
  for (int i = 0; i < 10000; ++i) step_rk4(b, 0.01, mp);
  CHECK(state_dist(a, b) <= 1e-4);
}

TEST_CASE("splitting step is time reversible") {
  const ModelParams mp = params();
  const LatticeState start = bump_state(64, 0.4, 6.0);
  LatticeState s = start;
  for (int i = 0; i < 500; ++i) step_strang(s, 0.02, mp);
  for (int i = 0; i < 500; ++i) step_strang(s, -0.02, mp);
  CHECK(state_dist(s, start) <= 1e-12);
  CHECK(s.t == doctest::Approx(0.0));
}

TEST_CASE("energy stays conserved by both integrators") {
  const ModelParams mp = params();
  LatticeState s = bump_state(64, 0.4, 6.0);
  const double h_initial = energy(s, mp);

  LatticeState r = s;
  for (int i = 0; i < 10000; ++i) step_rk4(r, 1e-3, mp);
  CHECK(std::abs(energy(r, mp) - h_initial) <= 1e-9 * std::abs(h_initial));

  // the splitting conserves a shadow energy; the true energy oscillates at
  // the dt^2 scale, measured near 4e-7 relative for this state
  LatticeState g = s;
  for (int i = 0; i < 1000; ++i) step_strang(g, 0.01, mp);
  CHECK(std::abs(energy(g, mp) - h_initial) <= 1e-6 * std::abs(h_initial));
}

TEST_CASE("ring reference reproduces the travelling wave") {
  const ModelParams mp = params();
  const TravellingWaveResult wave = solve_travelling_wave(mp);
  const int sites = 1024;
  const RingReference ref(wave, sites);

  // the sample at t = 0 is the verbatim stride-4 read of the embedding
  const auto s0 = ref.at_time(0.0);
  for (int i = 0; i < sites; ++i) {
    CHECK(s0.w[i] == ref.strain_z.values[4 * i]);
    CHECK(s0.p[i] == ref.momentum_z.values[4 * i]);
  }

  // the reference translates: values at t shift by c*t along the ring
  const double tshift = 4.0 / wave.speed;  // exactly 4 sites
  const auto s4 = ref.at_time(tshift);
  double sup = 0.0;
  for (int i = 4; i < sites - 4; ++i) sup = std::max(sup, std::abs(s4.w[i] - s0.w[i - 4]));
  CHECK(sup <= 1e-9);

  // doubling the ring leaves the overlapping samples unchanged
  const RingReference wide(wave, 2 * sites);
  const auto sw = wide.at_time(3.0);
  const auto sn = ref.at_time(3.0);
  double dsup = 0.0;
  for (int i = 0; i < sites; ++i)
    dsup = std::max(dsup, std::abs(sn.w[i] - sw.w[i + sites / 2]));
  CHECK(dsup <= 1e-10);
}

TEST_CASE("exact wave makes the perturbation energies vanish") {
  const ModelParams mp = params();
  const TravellingWaveResult wave = solve_travelling_wave(mp);
  const RingReference ref(wave, 1024);
  const auto r0 = ref.at_time(0.0);

  LatticeState s = make_ring(1024);
  s.w = r0.w;
  s.p = r0.p;
  const EnergySplit es = energy_split(s, ref, mp);
  CHECK(es.h1 == 0.0);
  CHECK(es.h2 == 0.0);
  CHECK(std::abs(es.hr) <= 1e-12 * std::abs(es.h0));
  CHECK(es.h0 == doctest::Approx(energy(s, mp)).epsilon(1e-14));

  // perturb and verify the split identities
  CounterRng rng{11, 0};
  for (int i = 0; i < 1024; ++i) {
    s.w[i] += 1e-3 * rng.normal(i);
    s.p[i] += 1e-3 * rng.normal(1024 + i);
  }
  const EnergySplit ep = energy_split(s, ref, mp);
  CHECK(ep.h2 >= 0.5 * (ep.norm_w2 + ep.norm_p2));  // V'' >= 1 on the wave
  CHECK(ep.h0 + ep.h1 + ep.h2 + ep.hr == doctest::Approx(energy(s, mp)).epsilon(1e-14));
  CHECK(std::abs(ep.hr) <= 1e-5 * (ep.norm_w2 + ep.norm_p2));  // cubic remainder
}

TEST_CASE("h1 balance rejects malformed checkpoint sets") {
  const ModelParams mp = params();
  const TravellingWaveResult wave = solve_travelling_wave(mp);
  const RingReference ref(wave, 1024);
  const auto r0 = ref.at_time(0.0);
  LatticeState base = make_ring(1024);
  base.w = r0.w;
  base.p = r0.p;

  std::vector<LatticeState> few(3, base);
  CHECK_THROWS_AS(h1_balance_check(few, ref, mp), std::invalid_argument);

  std::vector<LatticeState> wide(5, base);
  for (int j = 0; j < 5; ++j) wide[j].t = 0.5 * j;  // spacing above the 0.1 cap
  CHECK_THROWS_AS(h1_balance_check(wide, ref, mp), std::invalid_argument);

  std::vector<LatticeState> uneven(5, base);
  uneven[1].t = 0.05;
  uneven[2].t = 0.1;
  uneven[3].t = 0.18;
  uneven[4].t = 0.2;
  CHECK_THROWS_AS(h1_balance_check(uneven, ref, mp), std::invalid_argument);
}

TEST_CASE("guards abort with the offending state attached") {
  const ModelParams mp = params();
  LatticeState s = make_ring(8);
  s.w[2] = -0.6;  // inside the physical domain, outside the model ball
  std::vector<double> dw, dp;
  CHECK_THROWS_AS(rhs(s, mp, dw, dp), GuardViolation);
  try {
    rhs(s, mp, dw, dp);
  } catch (const GuardViolation& g) {
    CHECK(g.state.w[2] == -0.6);
  }

  // the splitting step tolerates the model-ball excursion but not -0.95
  LatticeState ok = s;
  step_strang(ok, 0.01, mp);
  LatticeState bad = make_ring(8);
  bad.w[2] = -0.951;
  CHECK_THROWS_AS(step_strang(bad, 0.01, mp), GuardViolation);

  CHECK_THROWS_AS(make_ring(2), std::invalid_argument);
}

TEST_CASE("physical displacements carry the precompression sign") {
  ModelParams mp = params();
  mp.v0 = 2.0;
  LatticeState s = make_ring(4);
  s.w = {0.0, 0.5, -0.25, 1.0};
  const auto u = to_physical(s, mp);
  CHECK(u[0] == -2.0);
  CHECK(u[1] == -3.0);
  CHECK(u[2] == -1.5);
  CHECK(u[3] == -4.0);
}
