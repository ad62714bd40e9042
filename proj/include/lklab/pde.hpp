#pragma once
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lklab/grid.hpp"

namespace lklab {

// Pseudospectral integrator for the dispersive flow
//   2 W_tau + (1/12) W_xixixi + (f(W))_xi = 0
// with flux f either the background nonlinearity g(W) = (1+W)log(1+W), the
// zero-background v log|v|, or a plain power W^p. The linear symbol i k^3/24
// is applied exactly through an integrating factor; the flux term advances by
// classical RK4 with 2/3-rule dealiasing.

enum class PdeFlux { background_g, vlogv, power };

struct PdeState {
  WaveProfile profile;  // xi-scale samples
  double tau = 0.0;
  PdeFlux flux = PdeFlux::background_g;
  int power_p = 2;  // exponent when flux == power
};

struct PdeCheckpoint {
  double tau = 0.0;
  double center = 0.0;  // max location via three-point parabolic fit
  double mass = 0.0;    // integral of W
  double l2 = 0.0;      // integral of W^2
  double min = 0.0;
  double max = 0.0;
};

// thrown on NaN or positivity-guard violation; carries the state at abort
struct PdeGuardViolation : std::runtime_error {
  PdeState state;
  PdeGuardViolation(std::string msg, PdeState s)
      : std::runtime_error(std::move(msg)), state(std::move(s)) {}
};

SpectralGrid default_xi_grid();
double default_dtau(const SpectralGrid& g);

void step_ifrk4(PdeState& s, double dtau);

// advances to tau_end, collecting a checkpoint every checkpoint_dtau (and at
// the endpoints); the observer, when set, sees the state at each checkpoint
std::vector<PdeCheckpoint> evolve(PdeState& s, double tau_end, double dtau,
                                  double checkpoint_dtau,
                                  const std::function<void(const PdeState&)>& observer = {});

// spectral quadrature of (integral W, integral W^2)
std::pair<double, double> conserved_quantities(const PdeState& s);

double profile_center(const WaveProfile& p);

PdeCheckpoint make_checkpoint(const PdeState& s);

}  // namespace lklab
