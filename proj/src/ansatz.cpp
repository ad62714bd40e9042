#include "lklab/ansatz.hpp"

#include <cmath>
#include <stdexcept>

#include "lklab/nonlinear.hpp"

namespace lklab {
namespace {

WaveProfile map_values(const WaveProfile& p, double (*f)(double, int), int order,
                       const char* tag) {
  WaveProfile out = p;
  out.tag = tag;
  for (double& v : out.values) v = f(v, order);
  return out;
}

void accumulate(WaveProfile& acc, double coeff, const WaveProfile& term) {
  for (int j = 0; j < acc.grid.n; ++j) acc.values[j] += coeff * term.values[j];
}

// P applied as a linear-plus-chain-rule operator: used both for P itself and
// for its tau derivative, where the g terms linearize to g'(W) * V
WaveProfile ansatz_operator(const WaveProfile& W, const WaveProfile& V,
                            const WaveProfile& gV, double eps) {
  WaveProfile out = make_profile(W.grid, "P", W.parity);
  accumulate(out, -1.0, V);
  accumulate(out, eps / 2.0, spectral_derivative(V, 1));
  accumulate(out, -eps * eps / 8.0, spectral_derivative(V, 2));
  accumulate(out, -eps * eps / 2.0, gV);
  accumulate(out, eps * eps * eps / 48.0, spectral_derivative(V, 3));
  accumulate(out, eps * eps * eps / 4.0, spectral_derivative(gV, 1));
  out.parity = Parity::none;
  return out;
}

}  // namespace

AnsatzPair build_ansatz(const WaveProfile& W, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("build_ansatz: epsilon must be >= 0");
  const double k_nyq = W.grid.wavenumber(W.grid.n / 2);
  if (band_energy_fraction(W, 0.875 * k_nyq) > 1e-10)
    throw std::runtime_error("build_ansatz: spectral tail of W too large for three derivatives");

  const WaveProfile gW = map_values(W, &g_log, 0, "g(W)");
  AnsatzPair pair;
  pair.W = W;
  pair.epsilon = epsilon;
  pair.P = ansatz_operator(W, W, gW, epsilon);
  return pair;
}

ResidualSequences residuals(const AnsatzPair& pair, double t) {
  const WaveProfile& W = pair.W;
  const double eps = pair.epsilon;
  if (!(eps > 0.0)) throw std::invalid_argument("residuals: epsilon must be positive");
  const SpectralGrid& g = W.grid;

  const WaveProfile gW = map_values(W, &g_log, 0, "g(W)");
  const WaveProfile dgW = spectral_derivative(gW, 1);
  const WaveProfile w1 = spectral_derivative(W, 1);
  const WaveProfile w3 = spectral_derivative(W, 3);

  // the transport of W comes from the equation itself: 2 W_tau = -W'''/12 - (g(W))'
  WaveProfile wtau = make_profile(g, "W_tau");
  accumulate(wtau, -1.0 / 24.0, w3);
  accumulate(wtau, -0.5, dgW);

  // tau derivative of P by the chain rule (g terms linearize to g'(W) W_tau)
  WaveProfile gp_wtau = make_profile(g, "g'(W) W_tau");
  for (int j = 0; j < g.n; ++j)
    gp_wtau.values[j] = g_log(W.values[j], 1) * wtau.values[j];
  const WaveProfile ptau = ansatz_operator(W, wtau, gp_wtau, eps);

  // first lattice equation: time derivative of w against the momentum difference
  WaveProfile r1 = band_shift(pair.P, -eps);  // P(xi + eps)
  accumulate(r1, -1.0, pair.P);
  accumulate(r1, eps, w1);
  accumulate(r1, -eps * eps * eps, wtau);

  // second lattice equation: time derivative of p against the force difference
  WaveProfile r2 = spectral_derivative(pair.P, 1);
  for (double& v : r2.values) v *= eps;
  accumulate(r2, -eps * eps * eps, ptau);
  accumulate(r2, 1.0, W);
  accumulate(r2, -1.0, band_shift(W, eps));  // W(xi - eps)
  accumulate(r2, eps * eps, gW);
  accumulate(r2, -eps * eps, band_shift(gW, eps));

  ResidualSequences out;
  const double l = g.half_width;
  out.n_lo = static_cast<int>(std::ceil(t - l / eps));
  const int count = static_cast<int>(std::floor(2.0 * l / eps));
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i) xs[i] = eps * (out.n_lo + i - t);
  out.res1 = sample_many(r1, xs);
  out.res2 = sample_many(r2, xs);
  out.l2_res1 = l2_norm(out.res1);
  out.l2_res2 = l2_norm(out.res2);
  return out;
}

}  // namespace lklab
