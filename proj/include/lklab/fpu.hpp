#pragma once
#include <stdexcept>
#include <utility>
#include <vector>

#include "lklab/grid.hpp"
#include "lklab/lattice_wave.hpp"
#include "lklab/nonlinear.hpp"

namespace lklab {

// First-order lattice dynamics on a periodic ring of N sites,
//   dw_n/dt = p_{n+1} - p_n,   dp_n/dt = V'(w_n) - V'(w_{n-1}),
// with conserved energy H = sum p^2/2 + V(w) and the energy decomposition
// around a travelling-wave reference.

struct LatticeState {
  std::vector<double> w;
  std::vector<double> p;
  double t = 0.0;

  int n_sites() const { return static_cast<int>(w.size()); }
};

LatticeState make_ring(int n_sites);

// default ring size: covers the wave support with room to spare
int default_ring_size(const ModelParams& mp);

// thrown when a strain leaves the guarded region; carries the state at abort
struct GuardViolation : std::runtime_error {
  LatticeState state;
  GuardViolation(std::string msg, LatticeState s)
      : std::runtime_error(std::move(msg)), state(std::move(s)) {}
};

void rhs(const LatticeState& s, const ModelParams& mp, std::vector<double>& dw,
         std::vector<double>& dp);

// drift-kick-drift composition of the two exactly integrable half-flows;
// second order, time reversible, conserves sum(w) and sum(p) exactly
void step_strang(LatticeState& s, double dt, const ModelParams& mp);

// classical fourth-order step, kept as a cross-validation oracle
void step_rk4(LatticeState& s, double dt, const ModelParams& mp);

double energy(const LatticeState& s, const ModelParams& mp);

// travelling-wave reference periodized onto the ring; evaluation at time t
// band-shifts the embedded profiles and reads off the lattice samples
struct RingReference {
  SpectralGrid zgrid;
  WaveProfile strain_z;     // w_stat embedded on the ring-sized z grid
  WaveProfile dstrain_z;    // its z derivative
  WaveProfile momentum_z;   // p_stat
  double speed = 0.0;
  int n_sites = 0;

  RingReference(const TravellingWaveResult& wave, int n_sites);

  struct Sample {
    std::vector<double> w, p, dw;
  };
  Sample at_time(double t) const;
};

struct EnergySplit {
  double h0 = 0.0;       // energy of the reference wave
  double h1 = 0.0;       // linear-in-perturbation part
  double h2 = 0.0;       // quadratic part
  double hr = 0.0;       // remainder H - H0 - H1 - H2
  double norm_w2 = 0.0;  // ||W||_{l2}^2 of the strain perturbation
  double norm_p2 = 0.0;  // ||P||_{l2}^2 of the momentum perturbation
};

EnergySplit energy_split(const LatticeState& s, const RingReference& ref,
                         const ModelParams& mp);

// same decomposition against an already-evaluated reference sample
EnergySplit energy_split_at(const LatticeState& s, const RingReference::Sample& r,
                            const ModelParams& mp);

// compares the finite-difference time derivative of H1 along equally spaced
// checkpoints against the quadratic form (c/2) sum w'_ref V''' W^2 at the
// stencil midpoint; the residual collects the cubic remainder
struct H1Balance {
  double t_mid = 0.0;
  double dh1_dt = 0.0;
  double quadratic_term = 0.0;
  double residual = 0.0;
};

H1Balance h1_balance_check(const std::vector<LatticeState>& checkpoints,
                           const RingReference& ref, const ModelParams& mp);

// physical displacement differences u_n = -v0 (1 + w_n)
std::vector<double> to_physical(const LatticeState& s, const ModelParams& mp);

}  // namespace lklab
