#include "lklab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "lklab/ansatz.hpp"
#include "lklab/fpu.hpp"
#include "lklab/grid.hpp"
#include "lklab/lattice_wave.hpp"
#include "lklab/pde.hpp"
#include "lklab/rng.hpp"
#include "lklab/stationary.hpp"

namespace lklab {
namespace {

double dist_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

ModelParams make_params(double lambda, double epsilon) {
  ModelParams mp;
  mp.lambda = lambda;
  mp.epsilon = epsilon;
  return mp;
}

// advances with uniform checkpoint spacing that divides t_end exactly; the
// callback sees the state at t = 0 and after every checkpoint block
void run_lattice(LatticeState& s, const ModelParams& mp, double t_end, double dt,
                 double checkpoint_dt,
                 const std::function<void(const LatticeState&)>& cb) {
  cb(s);
  if (!(t_end > 0.0)) return;
  const int ncp = std::max(1, static_cast<int>(std::round(t_end / checkpoint_dt)));
  const double cpd = t_end / ncp;
  for (int j = 1; j <= ncp; ++j) {
    const double target = j * cpd;
    const int steps = std::max(1, static_cast<int>(std::ceil((target - s.t) / dt - 1e-9)));
    const double h = (target - s.t) / steps;
    for (int i = 0; i < steps; ++i) step_strang(s, h, mp);
    s.t = target;  // keep checkpoint clocks exact
    cb(s);
  }
}

void advance_pde(PdeState& p, double tau_target, double dtau) {
  const double gap = tau_target - p.tau;
  if (gap <= 1e-15) {
    p.tau = tau_target;
    return;
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(gap / dtau - 1e-12)));
  const double h = gap / steps;
  for (int i = 0; i < steps; ++i) step_ifrk4(p, h);
  p.tau = tau_target;
}

// smallest C with Q(t) <= (Q0 + C eps^{9/2} t) exp(eps^3 C t) on all samples
double fit_envelope_c(const std::vector<std::pair<double, double>>& tq, double q0,
                      double eps) {
  const double e45 = std::pow(eps, 4.5);
  const double e3 = eps * eps * eps;
  auto admissible = [&](double c) {
    for (const auto& [t, q] : tq)
      if (q > (q0 + c * e45 * t) * std::exp(e3 * c * t)) return false;
    return true;
  };
  if (admissible(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (!admissible(hi)) {
    hi *= 2.0;
    if (hi > 1e15) return hi;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

bool ExperimentReport::all_pass() const {
  if (aborted) return false;
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

void ExperimentReport::add_verdict(const std::string& criterion, bool pass,
                                   double measured, double tolerance) {
  verdicts.push_back(Verdict{criterion, pass, measured, tolerance});
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("loglog_slope: need matching samples, at least two");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("loglog_slope: data must be positive");
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void parallel_for_each(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int nw = std::max(1, std::min(workers, count));
  if (nw == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lk(guard);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

// ---- travelling-wave convergence sweep --------------------------------------

ExperimentReport wave_convergence_sweep(const WaveSweepSettings& st) {
  ExperimentReport rep;
  rep.name = "wave_convergence";
  rep.params["lambda"] = st.lambda;
  rep.params["points"] = static_cast<double>(st.epsilons.size());

  const int n = static_cast<int>(st.epsilons.size());
  std::vector<std::optional<TravellingWaveResult>> solved(n);
  std::vector<std::string> failures(n);
  parallel_for_each(n, st.workers, [&](int i) {
    try {
      solved[i] = solve_travelling_wave(make_params(st.lambda, st.epsilons[i]));
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  Curve curve;
  curve.name = "wave_convergence";
  curve.columns = {"eps",       "err0",        "err1",        "ratio0",   "ratio1",
                   "residual",  "inner_iters", "outer_iters", "block_dim"};
  struct Row {
    double eps, e0, e1, r0, r1;
  };
  std::vector<Row> rows;
  double worst_residual = 0.0;
  int failed = 0;
  for (int i = 0; i < n; ++i) {
    if (!solved[i]) {
      ++failed;
      rep.abort_note += failures[i] + "; ";
      continue;
    }
    const auto& w = *solved[i];
    const double eps = st.epsilons[i];
    const double r0 = w.approx_error[0] / std::pow(eps, 1.0 / 6.0);
    const double r1 = w.approx_error[1] / std::pow(eps, 7.0 / 6.0);
    rows.push_back(Row{eps, w.approx_error[0], w.approx_error[1], r0, r1});
    worst_residual = std::max(worst_residual, w.residual_norm);
    curve.rows.push_back({eps, w.approx_error[0], w.approx_error[1], r0, r1,
                          w.residual_norm, static_cast<double>(w.inner_iterations),
                          static_cast<double>(w.outer_iterations),
                          static_cast<double>(w.block_dim)});
  }
  rep.curves.push_back(curve);

  rep.add_verdict("wave-solver-complete", failed == 0, static_cast<double>(failed), 0.0);
  rep.add_verdict("wave-residual-sup", failed == 0 && worst_residual <= 1e-10,
                  worst_residual, 1e-10);

  // errors must shrink as eps does; compare adjacent eps sorted descending
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.eps > b.eps; });
  double worst_adjacent = 0.0;
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    worst_adjacent = std::max(worst_adjacent, rows[i + 1].e0 / rows[i].e0);
    worst_adjacent = std::max(worst_adjacent, rows[i + 1].e1 / rows[i].e1);
  }
  rep.add_verdict("wave-error-monotone", rows.size() >= 2 && worst_adjacent < 1.0,
                  worst_adjacent, 1.0);

  // The approximation claim is one-sided: err_k <= C_k eps^{k+1/6} with C_k
  // uniform as eps -> 0. The observed order is better (about eps^{k+2}), so the
  // normalized constants fall as eps shrinks; what would falsify the bound is
  // growth of err_k/eps^{k+1/6} toward small eps. Measure that growth against
  // the coarsest eps, where the constant sits highest when the bound holds.
  double growth = 0.0;
  if (rows.size() >= 2) {
    for (const auto& r : rows) {
      growth = std::max(growth, r.r0 / rows.front().r0);
      growth = std::max(growth, r.r1 / rows.front().r1);
    }
    std::vector<double> eps_list, e0_list, e1_list;
    for (const auto& r : rows) {
      eps_list.push_back(r.eps);
      e0_list.push_back(r.e0);
      e1_list.push_back(r.e1);
    }
    rep.fitted["slope_err0"] = loglog_slope(eps_list, e0_list);
    rep.fitted["slope_err1"] = loglog_slope(eps_list, e1_list);
  }
  rep.add_verdict("wave-ratio-stable", rows.size() >= 2 && growth <= 10.0, growth, 10.0);
  return rep;
}

// ---- lattice stability around the travelling wave ---------------------------

PerturbationKind perturbation_from_name(const std::string& name) {
  if (name == "gaussian") return PerturbationKind::gaussian;
  if (name == "single-site" || name == "single_site") return PerturbationKind::single_site;
  if (name == "phase-shift" || name == "phase_shift") return PerturbationKind::phase_shift;
  throw std::invalid_argument("unknown perturbation kind: " + name);
}

std::string perturbation_name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::gaussian: return "gaussian";
    case PerturbationKind::single_site: return "single-site";
    case PerturbationKind::phase_shift: return "phase-shift";
  }
  return "?";
}

ExperimentReport stability_experiment(const StabilitySettings& st) {
  ExperimentReport rep;
  rep.name = "stability";
  rep.seed = st.seed;
  rep.params = {{"lambda", st.lambda},
                {"epsilon", st.epsilon},
                {"delta", st.delta},
                {"tau0", st.tau0},
                {"dt", st.dt},
                {"err_ceiling", st.err_ceiling},
                {"checkpoint_dt", st.checkpoint_dt},
                {"perturbation", static_cast<double>(static_cast<int>(st.kind))}};

  const ModelParams mp = make_params(st.lambda, st.epsilon);
  const auto wave = solve_travelling_wave(mp);
  const int sites = st.ring_sites > 0 ? st.ring_sites : default_ring_size(mp);
  rep.params["ring_sites"] = sites;
  const RingReference ref(wave, sites);
  const auto base = ref.at_time(0.0);

  LatticeState s = make_ring(sites);
  s.w = base.w;
  s.p = base.p;

  switch (st.kind) {
    case PerturbationKind::gaussian: {
      if (st.delta > 0.0) {
        const CounterRng rng{st.seed, 1};
        std::vector<double> gw(sites), gp(sites);
        for (int i = 0; i < sites; ++i) {
          gw[i] = rng.normal(i);
          gp[i] = rng.normal(sites + i);
        }
        const double scale = st.delta / (l2_norm(gw) + l2_norm(gp));
        for (int i = 0; i < sites; ++i) {
          s.w[i] += scale * gw[i];
          s.p[i] += scale * gp[i];
        }
      }
      break;
    }
    case PerturbationKind::single_site:
      if (st.delta > 0.0) s.w[sites / 2] += st.delta;
      break;
    case PerturbationKind::phase_shift: {
      if (st.delta > 0.0) {
        // pick the time offset whose shifted wave sits at l2 distance delta
        double tsh = st.delta;
        for (int it = 0; it < 3; ++it) {
          const auto moved = ref.at_time(tsh);
          const double f = dist_l2(moved.w, base.w) + dist_l2(moved.p, base.p);
          if (f <= 0.0) break;
          tsh *= st.delta / f;
        }
        const auto moved = ref.at_time(tsh);
        s.w = moved.w;
        s.p = moved.p;
      }
      break;
    }
  }

  Curve curve;
  curve.name = "stability_error";
  curve.columns = {"t", "err", "err_w", "err_p", "h0", "h1", "h2", "hr", "energy"};

  const double e3 = st.epsilon * st.epsilon * st.epsilon;
  const double t_end = st.tau0 / e3;
  double err0 = 0.0, max_err = 0.0, gronwall_c = 0.0;
  auto on_checkpoint = [&](const LatticeState& state) {
    const auto r = ref.at_time(state.t);
    const double ew = dist_l2(state.w, r.w);
    const double ep = dist_l2(state.p, r.p);
    const double err = ew + ep;
    const auto es = energy_split_at(state, r, mp);
    curve.rows.push_back(
        {state.t, err, ew, ep, es.h0, es.h1, es.h2, es.hr, energy(state, mp)});
    if (state.t == 0.0) err0 = err;
    max_err = std::max(max_err, err);
    if (state.t > 0.0 && err0 > 0.0 && err > err0)
      gronwall_c = std::max(gronwall_c, std::log(err / err0) / (e3 * state.t));
  };

  try {
    run_lattice(s, mp, t_end, st.dt, st.checkpoint_dt, on_checkpoint);
  } catch (const GuardViolation& e) {
    rep.aborted = true;
    rep.abort_note = e.what();
  }
  rep.curves.push_back(curve);
  rep.fitted["err0"] = err0;
  rep.fitted["max_err"] = max_err;
  rep.fitted["gronwall_c"] = gronwall_c;

  if (st.delta > 0.0) {
    rep.add_verdict("stability-error-ceiling", !rep.aborted && max_err <= st.err_ceiling * st.delta,
                    st.delta > 0 ? max_err / st.delta : 0.0, st.err_ceiling);
  } else {
    // pure transport: the curve records the integrator error of the wave itself
    rep.add_verdict("stability-transport-complete", !rep.aborted, max_err, 0.0);
  }
  return rep;
}

// ---- lattice-vs-continuum justification -------------------------------------

ExperimentReport justification_experiment(const JustificationSettings& st) {
  ExperimentReport rep;
  rep.name = "justification";
  rep.params = {{"lambda", st.lambda},
                {"epsilon", st.epsilon},
                {"tau1", st.tau1},
                {"dt", st.dt},
                {"dtau", st.dtau},
                {"source", st.source == JustificationSource::stationary ? 0.0 : 1.0}};

  const double eps = st.epsilon;
  const double e3 = eps * eps * eps;
  const double e32 = std::pow(eps, 1.5);
  const ModelParams mp = make_params(st.lambda, eps);

  const StationaryWave stat = solve_stationary(st.lambda, default_x_grid(st.lambda));
  const AnsatzPair still = build_ansatz(stat.profile, eps);
  const double half_width = stat.profile.grid.half_width;

  const int sites = st.ring_sites > 0 ? st.ring_sites : default_ring_size(mp);
  rep.params["ring_sites"] = sites;
  const int center = sites / 2;

  std::optional<PdeState> pde;
  if (st.source == JustificationSource::pde_run)
    pde = PdeState{stat.profile, 0.0, PdeFlux::background_g, 2};

  double min_ref_w = 0.0;

  // continuum fields at every site for lattice time t; sites whose scaled
  // coordinate falls beyond the profile grid see the zero tail
  struct RefFields {
    std::vector<double> w, p;
  };
  auto reference_at = [&](double t) {
    const WaveProfile* wprof = &still.W;
    const WaveProfile* pprof = &still.P;
    AnsatzPair transported;
    double shift = 0.5 * st.lambda * e3 * t;
    if (pde) {
      advance_pde(*pde, e3 * t, st.dtau);
      transported = build_ansatz(pde->profile, eps);
      wprof = &transported.W;
      pprof = &transported.P;
      shift = 0.0;
    }
    std::vector<int> idx;
    std::vector<double> args;
    idx.reserve(sites);
    args.reserve(sites);
    for (int n_site = 0; n_site < sites; ++n_site) {
      const double arg = eps * (n_site - center - t) - shift;
      if (std::abs(arg) < half_width) {
        idx.push_back(n_site);
        args.push_back(arg);
      }
    }
    RefFields r;
    r.w.assign(sites, 0.0);
    r.p.assign(sites, 0.0);
    if (!idx.empty()) {
      const auto ws = sample_many(*wprof, args);
      const auto ps = sample_many(*pprof, args);
      for (size_t m = 0; m < idx.size(); ++m) {
        r.w[idx[m]] = ws[m];
        r.p[idx[m]] = ps[m];
      }
    }
    for (double v : r.w) min_ref_w = std::min(min_ref_w, v);
    return r;
  };

  LatticeState s = make_ring(sites);
  {
    const auto r0 = reference_at(0.0);
    s.w = r0.w;
    s.p = r0.p;
  }
  if (pde) pde->tau = 0.0;  // rewind the reference clock for the run proper

  Curve errs;
  errs.name = "justification_error";
  errs.columns = {"t", "err", "err_w", "err_p", "err_scaled"};
  Curve etype;
  etype.name = "energy_type";
  etype.columns = {"t", "energy_type", "q", "perturbation_sq", "domination_ratio"};

  const double t_end = st.tau1 / e3;
  const double cpd = st.checkpoint_dt > 0.0 ? st.checkpoint_dt : t_end / 100.0;

  double err_at_0 = -1.0, sup_err = 0.0, max_ratio = 0.0;
  std::vector<std::pair<double, double>> tq;
  auto on_checkpoint = [&](const LatticeState& state) {
    const auto r = reference_at(state.t);
    const double ew = dist_l2(state.w, r.w);
    const double ep = dist_l2(state.p, r.p);
    const double err = ew + ep;
    if (err_at_0 < 0.0) err_at_0 = err;
    sup_err = std::max(sup_err, err);
    errs.rows.push_back({state.t, err, ew, ep, err / e32});

    double pert2 = 0.0, weighted = 0.0;
    for (int i = 0; i < sites; ++i) {
      const double dw = state.w[i] - r.w[i];
      const double dp = state.p[i] - r.p[i];
      pert2 += dw * dw + dp * dp;
      weighted += eps * eps * g_log(r.w[i], 1) * dw * dw;
    }
    const double energy_type = 0.5 * (pert2 + weighted);
    const double q = energy_type > 0.0 ? std::sqrt(energy_type) : 0.0;
    const double ratio = energy_type > 0.0 ? pert2 / energy_type : 0.0;
    max_ratio = std::max(max_ratio, ratio);
    etype.rows.push_back({state.t, energy_type, q, pert2, ratio});
    if (state.t > 0.0) tq.push_back({state.t, q});
  };

  try {
    run_lattice(s, mp, t_end, st.dt, cpd, on_checkpoint);
  } catch (const GuardViolation& e) {
    rep.aborted = true;
    rep.abort_note = e.what();
  } catch (const PdeGuardViolation& e) {
    rep.aborted = true;
    rep.abort_note = e.what();
  }
  rep.curves.push_back(errs);
  rep.curves.push_back(etype);

  const double q0 = etype.rows.empty() ? 0.0 : etype.rows.front()[2];
  rep.fitted["err0"] = err_at_0;
  rep.fitted["sup_err"] = sup_err;
  rep.fitted["c_sup"] = sup_err / e32;
  rep.fitted["envelope_c"] = fit_envelope_c(tq, q0, eps);
  rep.fitted["min_ref_w"] = min_ref_w;

  rep.add_verdict("justification-initial-error", err_at_0 >= 0.0 && err_at_0 <= 1e-14,
                  err_at_0, 1e-14);
  rep.add_verdict("justification-positivity", !rep.aborted && min_ref_w > -1.0, min_ref_w,
                  -1.0);
  rep.add_verdict("energy-type-domination", !rep.aborted && max_ratio <= 4.0 + 1e-9,
                  max_ratio, 4.0);
  return rep;
}

// ---- scaling of the lattice-sampling inequality ------------------------------

ExperimentReport sampling_constant_check(const SamplingSettings& st) {
  ExperimentReport rep;
  rep.name = "sampling_constant";
  rep.params["points"] = static_cast<double>(st.epsilons.size());

  struct TestFn {
    const char* name;
    double (*f)(double);
  };
  const TestFn fns[] = {
      {"gaussian", [](double x) { return std::exp(-x * x); }},
      {"sech", [](double x) { return 1.0 / std::cosh(x); }},
  };

  const SpectralGrid g{4096, 40.0};
  double h1_norm[2];
  for (int k = 0; k < 2; ++k) {
    WaveProfile prof = make_profile(g, fns[k].name);
    for (int j = 0; j < g.n; ++j) prof.values[j] = fns[k].f(g.node(j));
    h1_norm[k] = grid_h(prof, 1.0);
  }

  Curve curve;
  curve.name = "sampling_constant";
  curve.columns = {"eps", "c_gaussian", "c_sech"};
  double cmin[2] = {1e300, 1e300}, cmax[2] = {0.0, 0.0};
  for (double eps : st.epsilons) {
    double c[2];
    const int m = static_cast<int>(std::ceil(60.0 / eps));
    for (int k = 0; k < 2; ++k) {
      double sum = 0.0;
      for (int n = -m; n <= m; ++n) {
        const double v = fns[k].f(eps * n);
        sum += v * v;
      }
      c[k] = std::sqrt(eps * sum) / h1_norm[k];
      cmin[k] = std::min(cmin[k], c[k]);
      cmax[k] = std::max(cmax[k], c[k]);
    }
    curve.rows.push_back({eps, c[0], c[1]});
  }
  rep.curves.push_back(curve);

  for (int k = 0; k < 2; ++k) {
    const double spread = cmax[k] / cmin[k] - 1.0;
    rep.fitted[std::string("c_") + fns[k].name] = 0.5 * (cmin[k] + cmax[k]);
    rep.add_verdict(std::string("sampling-constant-") + fns[k].name, spread <= 0.05,
                    spread, 0.05);
  }
  return rep;
}

// ---- ansatz residual decay ---------------------------------------------------

ExperimentReport residual_slope_experiment(const ResidualSweepSettings& st) {
  ExperimentReport rep;
  rep.name = "residual_slope";
  rep.params["lambda"] = st.lambda;

  const StationaryWave stat = solve_stationary(st.lambda, default_x_grid(st.lambda));

  Curve curve;
  curve.name = "residual_decay";
  curve.columns = {"eps", "res1_l2", "res2_l2", "total"};
  std::vector<double> eps_list, totals;
  for (double eps : st.epsilons) {
    const AnsatzPair pair = build_ansatz(stat.profile, eps);
    const ResidualSequences r = residuals(pair, 0.0);
    const double total = r.l2_res1 + r.l2_res2;
    curve.rows.push_back({eps, r.l2_res1, r.l2_res2, total});
    eps_list.push_back(eps);
    totals.push_back(total);
  }
  rep.curves.push_back(curve);

  const double slope = loglog_slope(eps_list, totals);
  rep.fitted["slope"] = slope;
  rep.add_verdict("residual-slope-window", slope >= 4.3 && slope <= 5.5, slope, 4.3);
  return rep;
}

}  // namespace lklab
