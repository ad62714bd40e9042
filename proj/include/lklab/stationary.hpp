#pragma once
#include <utility>
#include <vector>

#include "lklab/grid.hpp"

namespace lklab {

// Solitary profile of the stationary problem lambda W = W''/12 + (1+W)log(1+W)
// on the line, sampled onto a periodic grid.  Solved by integrating backward
// from the exponential tail (the stable direction, so transverse errors decay)
// up to the even maximum, with the conserved first integral as a cross-check,
// and continued by the exp(-kappa x) tail beyond the starting amplitude.
struct StationaryWave {
  double lambda = 2.0;
  double turning_value = 0.0;   // W(0), the even maximum
  double decay_rate = 0.0;      // kappa = sqrt(12 (lambda - 1))
  double matching_x = 0.0;      // switch-over point to the exponential tail
  double residual_sup = 0.0;    // sup | lambda W - W''/12 - g(W) | on the grid
  double first_integral_drift = 0.0;  // max |E + 1/4| along the shooting path
  WaveProfile profile;          // tag "W", even
  std::vector<std::pair<double, double>> tail_samples;  // (x, W) along the ODE path
};

// E(W, W') = W'^2/24 + (1+W)^2 log(1+W)/2 - (1+W)^2/4 - lambda W^2/2;
// E = -1/4 on the homoclinic orbit.
double first_integral(double W, double Wp, double lambda);

// unique positive root of E(W, 0) = -1/4, located by scan + bisection on
// (0, exp(2 lambda)]
double turning_point(double lambda);

// half_width = max(20, 12/kappa), 2048 points
SpectralGrid default_x_grid(double lambda);

StationaryWave solve_stationary(double lambda, const SpectralGrid& grid);

// least-squares slope of log W over x in [0.90, 0.99] * matching_x; returns
// the positive decay estimate (to compare with kappa)
double fit_tail_slope(const StationaryWave& wave);

// sqrt(e) exp(-3 x^2): the explicit zero-background ground state of
// v''/12 + v log v = 0
WaveProfile gaussian_profile(const SpectralGrid& grid);

// A sech^{2/(p-1)}(B x) with A = (lambda (p+1)/2)^{1/(p-1)},
// B = sqrt(12 lambda) (p-1)/2: stationary profile of the power flux W^p
WaveProfile power_soliton(double lambda, int p, const SpectralGrid& grid);

}  // namespace lklab
