#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lklab/nonlinear.hpp"

namespace lklab {

// One named pass/fail judgement with the number measured and the bound it
// was held against.
struct Verdict {
  std::string criterion;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

// Tabular experiment output destined for a CSV file.
struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string name;
  std::map<std::string, double> params;  // resolved numeric settings
  std::vector<Verdict> verdicts;
  std::map<std::string, double> fitted;  // fitted constants and slopes
  std::vector<Curve> curves;
  std::uint64_t seed = 0;
  bool aborted = false;
  std::string abort_note;

  bool all_pass() const;
  void add_verdict(const std::string& criterion, bool pass, double measured,
                   double tolerance);
};

// least-squares slope of log y against log x (requires positive data)
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// run fn(0..count-1) on up to `workers` threads; exceptions propagate
void parallel_for_each(int count, int workers, const std::function<void(int)>& fn);

// ---- travelling-wave convergence sweep --------------------------------------
struct WaveSweepSettings {
  double lambda = 2.0;
  std::vector<double> epsilons = {0.2, 0.141, 0.1, 0.0707, 0.05};
  int workers = 1;
};

// solves the wave for each epsilon and checks that the profile errors against
// the scaled stationary limit shrink like eps^{1/6} and eps^{7/6} with stable
// constants
ExperimentReport wave_convergence_sweep(const WaveSweepSettings& st);

// ---- lattice stability around the travelling wave ---------------------------
enum class PerturbationKind { gaussian, single_site, phase_shift };

PerturbationKind perturbation_from_name(const std::string& name);
std::string perturbation_name(PerturbationKind k);

struct StabilitySettings {
  double lambda = 2.0;
  double epsilon = 0.1;
  double delta = 1e-3;    // l2 size of the seeded perturbation
  double tau0 = 1.0;      // horizon tau0 * eps^-3 in lattice time
  PerturbationKind kind = PerturbationKind::gaussian;
  std::uint64_t seed = 42;
  double dt = 0.01;
  double err_ceiling = 10.0;  // verdict: err(t) <= ceiling * delta
  double checkpoint_dt = 1.0;
  int ring_sites = 0;  // 0 picks the default ring size
};

ExperimentReport stability_experiment(const StabilitySettings& st);

// ---- lattice-vs-continuum justification -------------------------------------
enum class JustificationSource { stationary, pde_run };

struct JustificationSettings {
  double lambda = 2.0;
  double epsilon = 0.1;
  double tau1 = 1.0;  // horizon tau1 * eps^-3
  JustificationSource source = JustificationSource::stationary;
  double dt = 0.01;
  double dtau = 5e-4;         // PDE step when the reference is a PDE run
  double checkpoint_dt = 0.0;  // 0 picks tau1 * eps^-3 / 100
  int ring_sites = 0;
};

// initializes the lattice from (W, P_eps) sampled at eps * n, evolves to
// tau1 * eps^-3, and tracks the l2 distance to the transported continuum
// fields plus the energy-type quantity E(t)
ExperimentReport justification_experiment(const JustificationSettings& st);

// ---- scaling of the lattice-sampling inequality ------------------------------
struct SamplingSettings {
  std::vector<double> epsilons = {0.02, 0.0316, 0.05, 0.0794, 0.126, 0.2};
};

// bounds ||X(eps .)||_{l2} <= C eps^{-1/2} ||X||_{H1}: the fitted C should not
// depend on eps
ExperimentReport sampling_constant_check(const SamplingSettings& st);

// ---- ansatz residual decay ----------------------------------------------------
struct ResidualSweepSettings {
  double lambda = 2.0;
  std::vector<double> epsilons = {0.05, 0.0707, 0.1, 0.141, 0.2};
};

ExperimentReport residual_slope_experiment(const ResidualSweepSettings& st);

}  // namespace lklab
