#include "lklab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lklab/ansatz.hpp"
#include "lklab/config.hpp"
#include "lklab/experiments.hpp"
#include "lklab/fpu.hpp"
#include "lklab/io.hpp"
#include "lklab/lattice_wave.hpp"
#include "lklab/pde.hpp"
#include "lklab/spectra.hpp"
#include "lklab/stationary.hpp"

namespace lklab::cli {
namespace {

namespace fs = std::filesystem;

struct RunOutput {
  ExperimentReport report;
  std::vector<std::pair<WaveProfile, std::string>> profiles;
};

std::string run_id(const RunConfig& cfg) {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return std::string(buf) + "-" + config_hash(cfg).substr(0, 8);
}

SpectralGrid resolve_x_grid(const RunConfig& cfg, double lambda) {
  SpectralGrid g = default_x_grid(lambda);
  if (cfg.grid_n > 0) g.n = cfg.grid_n;
  if (cfg.half_width > 0.0) g.half_width = cfg.half_width;
  return g;
}

// ---- subcommand pipelines ---------------------------------------------------

RunOutput cmd_wave(const RunConfig& cfg) {
  RunOutput out;
  ModelParams mp = cfg.model;
  SpectralGrid grid = default_z_grid(mp);
  if (cfg.grid_n > 0) grid.n = cfg.grid_n;
  if (cfg.half_width > 0.0) grid.half_width = cfg.half_width;
  const TravellingWaveResult wave = solve_travelling_wave(mp, grid);

  ExperimentReport& rep = out.report;
  rep.name = "wave";
  rep.params = {{"lambda", mp.lambda},
                {"epsilon", mp.epsilon},
                {"grid_n", static_cast<double>(wave.strain.grid.n)},
                {"half_width", wave.strain.grid.half_width}};
  rep.fitted["speed"] = wave.speed;
  rep.fitted["inner_iterations"] = wave.inner_iterations;
  rep.fitted["outer_iterations"] = wave.outer_iterations;
  rep.fitted["block_dim"] = wave.block_dim;
  rep.fitted["approx_error_0"] = wave.approx_error[0];
  rep.fitted["approx_error_1"] = wave.approx_error[1];
  rep.fitted["max_strain"] = wave.max_strain;
  rep.fitted["min_strain"] = wave.min_strain;

  rep.add_verdict("wave-residual-sup", wave.residual_norm <= 1e-10, wave.residual_norm, 1e-10);
  rep.add_verdict("wave-strain-ball",
                  wave.min_strain > mp.ball_r && wave.max_strain < mp.upper_ball(),
                  wave.min_strain, mp.ball_r);
  rep.add_verdict("wave-even-symmetry", wave.antisym_fraction <= 1e-10, wave.antisym_fraction,
                  1e-10);
  out.profiles.emplace_back(wave.strain, "strain");
  out.profiles.emplace_back(wave.momentum, "momentum");
  return out;
}

RunOutput cmd_spectrum(const RunConfig& cfg) {
  RunOutput out;
  const double lambda = cfg.model.lambda;
  const StationaryWave stat = solve_stationary(lambda, resolve_x_grid(cfg, lambda));

  const OperatorMatrix l_op = build_L(stat);
  const SpectralReport lrep = spectral_report(l_op, stat);
  const OperatorMatrix s_op = build_S_sym(stat);
  const SpectralReport srep = spectral_report(s_op, stat);

  ExperimentReport& rep = out.report;
  rep.name = "spectrum";
  rep.params = {{"lambda", lambda}, {"grid_n", static_cast<double>(stat.profile.grid.n)}};
  rep.fitted["l_min_eigenvalue"] = lrep.min_eigenvalue;
  rep.fitted["l_gap_above_zero"] = lrep.gap_above_zero;
  rep.fitted["l_continuum_floor"] = lrep.continuum_floor;
  rep.fitted["s_gap_below_one"] = srep.gap_below_one;

  rep.add_verdict("spectrum-L-negative-count", lrep.n_negative == 1,
                  static_cast<double>(lrep.n_negative), 1.0);
  rep.add_verdict("spectrum-L-kernel-dim", lrep.n_zero == 1, static_cast<double>(lrep.n_zero),
                  1.0);
  rep.add_verdict("spectrum-L-kernel-alignment", lrep.alignment >= 0.999, lrep.alignment, 0.999);
  rep.add_verdict("spectrum-L-gap", lrep.gap_above_zero > 0.01, lrep.gap_above_zero, 0.01);
  rep.add_verdict("spectrum-S-above-one-count", srep.n_above_one == 1,
                  static_cast<double>(srep.n_above_one), 1.0);
  rep.add_verdict("spectrum-S-unit-multiplicity", srep.mult_one == 1,
                  static_cast<double>(srep.mult_one), 1.0);
  rep.add_verdict("spectrum-S-positive", srep.min_eigenvalue > -1e-6, srep.min_eigenvalue, 0.0);
  rep.add_verdict("spectrum-inertia-match",
                  lrep.n_negative == srep.n_above_one && lrep.n_zero == srep.mult_one,
                  static_cast<double>(lrep.n_negative - srep.n_above_one), 0.0);

  Curve cl{"eigenvalues_L", {"index", "eigenvalue"}, {}};
  for (size_t i = 0; i < lrep.eigenvalues.size(); ++i)
    cl.rows.push_back({static_cast<double>(i), lrep.eigenvalues[i]});
  Curve cs{"eigenvalues_S", {"index", "eigenvalue"}, {}};
  for (size_t i = 0; i < srep.eigenvalues.size(); ++i)
    cs.rows.push_back({static_cast<double>(i), srep.eigenvalues[i]});
  rep.curves.push_back(cl);
  rep.curves.push_back(cs);
  out.profiles.emplace_back(stat.profile, "stationary");
  return out;
}

RunOutput cmd_simulate(const RunConfig& cfg) {
  RunOutput out;
  const ModelParams mp = cfg.model;
  const TravellingWaveResult wave = solve_travelling_wave(mp);
  const int sites = cfg.ring_sites > 0 ? cfg.ring_sites : default_ring_size(mp);
  const RingReference ref(wave, sites);
  const auto base = ref.at_time(0.0);

  LatticeState s = make_ring(sites);
  s.w = base.w;
  s.p = base.p;

  double sum_w0 = 0.0, sum_p0 = 0.0;
  for (int i = 0; i < sites; ++i) {
    sum_w0 += s.w[i];
    sum_p0 += s.p[i];
  }
  const double h_initial = energy(s, mp);

  Curve traj{"trajectory",
             {"t", "norm_w", "norm_p", "energy", "h0", "h1", "h2", "hr", "err_l2"},
             {}};
  double max_energy_drift = 0.0, max_sum_drift = 0.0, final_err = 0.0;

  const double t_end = cfg.t_end;
  const int ncp = std::max(1, static_cast<int>(std::round(t_end / cfg.checkpoint_dt)));
  const double cpd = t_end / ncp;
  auto checkpoint = [&](const LatticeState& state) {
    const auto r = ref.at_time(state.t);
    double ew = 0.0, sw = 0.0, sp = 0.0;
    for (int i = 0; i < sites; ++i) {
      const double dw = state.w[i] - r.w[i];
      const double dp = state.p[i] - r.p[i];
      ew += dw * dw + dp * dp;
      sw += state.w[i];
      sp += state.p[i];
    }
    final_err = std::sqrt(ew);
    const auto es = energy_split_at(state, r, mp);
    const double h = energy(state, mp);
    traj.rows.push_back({state.t, l2_norm(state.w), l2_norm(state.p), h, es.h0, es.h1, es.h2,
                         es.hr, final_err});
    max_energy_drift = std::max(max_energy_drift, std::abs(h - h_initial) / std::abs(h_initial));
    max_sum_drift = std::max({max_sum_drift, std::abs(sw - sum_w0), std::abs(sp - sum_p0)});
  };

  checkpoint(s);
  for (int j = 1; j <= ncp; ++j) {
    const double target = j * cpd;
    const int steps = std::max(1, static_cast<int>(std::ceil((target - s.t) / cfg.dt - 1e-9)));
    const double h = (target - s.t) / steps;
    for (int i = 0; i < steps; ++i) step_strang(s, h, mp);
    s.t = target;
    checkpoint(s);
  }

  ExperimentReport& rep = out.report;
  rep.name = "simulate";
  rep.params = {{"lambda", mp.lambda},
                {"epsilon", mp.epsilon},
                {"dt", cfg.dt},
                {"t_end", t_end},
                {"ring_sites", static_cast<double>(sites)}};
  rep.fitted["energy_initial"] = h_initial;
  rep.fitted["final_err_l2"] = final_err;
  rep.curves.push_back(traj);
  rep.add_verdict("simulate-energy-drift", max_energy_drift <= 1e-6, max_energy_drift, 1e-6);
  rep.add_verdict("simulate-sum-conservation", max_sum_drift <= 1e-12 * sites, max_sum_drift,
                  1e-12 * sites);
  return out;
}

RunOutput cmd_pde(const RunConfig& cfg) {
  RunOutput out;
  const double lambda = cfg.model.lambda;

  PdeState state;
  if (cfg.flux == "background-g") {
    const StationaryWave stat = solve_stationary(lambda, resolve_x_grid(cfg, lambda));
    state = PdeState{stat.profile, 0.0, PdeFlux::background_g, 2};
  } else {
    SpectralGrid g = default_xi_grid();
    if (cfg.grid_n > 0) g.n = cfg.grid_n;
    if (cfg.half_width > 0.0) g.half_width = cfg.half_width;
    if (cfg.flux == "vlogv")
      state = PdeState{gaussian_profile(g), 0.0, PdeFlux::vlogv, 2};
    else
      state = PdeState{power_soliton(lambda, cfg.model.power_p, g), 0.0, PdeFlux::power,
                       cfg.model.power_p};
  }
  const WaveProfile initial = state.profile;

  ExperimentReport& rep = out.report;
  rep.name = "pde";
  rep.params = {{"lambda", lambda},
                {"tau_end", cfg.tau_end},
                {"dtau", cfg.dtau},
                {"grid_n", static_cast<double>(state.profile.grid.n)}};

  std::vector<PdeCheckpoint> cps;
  try {
    cps = evolve(state, cfg.tau_end, cfg.dtau, cfg.tau_end / 100.0);
  } catch (const PdeGuardViolation& e) {
    rep.aborted = true;
    rep.abort_note = e.what();
  }

  Curve curve{"pde_checkpoints", {"tau", "center", "mass", "l2", "min", "max"}, {}};
  for (const auto& cp : cps)
    curve.rows.push_back({cp.tau, cp.center, cp.mass, cp.l2, cp.min, cp.max});
  rep.curves.push_back(curve);
  out.profiles.emplace_back(initial, "pde_initial");
  out.profiles.emplace_back(state.profile, "pde_final");
  if (rep.aborted) return out;

  const double mass0 = cps.front().mass, l20 = cps.front().l2;
  double mass_drift = 0.0, l2_drift = 0.0;
  for (const auto& cp : cps) {
    mass_drift = std::max(mass_drift, std::abs(cp.mass - mass0) / std::abs(mass0));
    l2_drift = std::max(l2_drift, std::abs(cp.l2 - l20) / std::abs(l20));
  }
  rep.add_verdict("pde-mass-drift", mass_drift <= 1e-10, mass_drift, 1e-10);
  rep.add_verdict("pde-l2-drift", l2_drift <= 1e-8, l2_drift, 1e-8);

  // center transport: least-squares slope of center vs tau
  double st = 0, sc = 0, stt = 0, stc = 0;
  for (const auto& cp : cps) {
    st += cp.tau;
    sc += cp.center;
    stt += cp.tau * cp.tau;
    stc += cp.tau * cp.center;
  }
  const double n = static_cast<double>(cps.size());
  const double speed = (n * stc - st * sc) / (n * stt - st * st);
  rep.fitted["center_speed"] = speed;

  if (cfg.flux == "background-g") {
    const double expected = 0.5 * lambda;
    rep.add_verdict("pde-translation-speed", std::abs(speed / expected - 1.0) <= 5e-3,
                    speed, expected);
  } else if (cfg.flux == "vlogv") {
    double sup = 0.0;
    for (int j = 0; j < initial.grid.n; ++j)
      sup = std::max(sup, std::abs(state.profile.values[j] - initial.values[j]));
    rep.add_verdict("pde-gausson-steady", sup <= 1e-5, sup, 1e-5);
  }
  return out;
}

RunOutput cmd_justify(const RunConfig& cfg) {
  JustificationSettings st;
  st.lambda = cfg.model.lambda;
  st.epsilon = cfg.model.epsilon;
  st.tau1 = cfg.tau1;
  st.source = cfg.source == "pde-run" ? JustificationSource::pde_run
                                      : JustificationSource::stationary;
  st.dt = cfg.dt;
  st.dtau = cfg.dtau;
  st.checkpoint_dt = cfg.checkpoint_dt;
  st.ring_sites = cfg.ring_sites;
  RunOutput out;
  out.report = justification_experiment(st);
  return out;
}

RunOutput cmd_stability(const RunConfig& cfg) {
  StabilitySettings st;
  st.lambda = cfg.model.lambda;
  st.epsilon = cfg.model.epsilon;
  st.delta = cfg.delta;
  st.tau0 = cfg.tau0;
  st.kind = perturbation_from_name(cfg.perturbation);
  st.seed = cfg.seed;
  st.dt = cfg.dt;
  st.err_ceiling = cfg.err_ceiling;
  st.checkpoint_dt = cfg.checkpoint_dt;
  st.ring_sites = cfg.ring_sites;
  RunOutput out;
  out.report = stability_experiment(st);
  return out;
}

RunOutput cmd_residuals(const RunConfig& cfg) {
  ResidualSweepSettings st;
  st.lambda = cfg.model.lambda;
  if (!cfg.epsilons.empty()) st.epsilons = cfg.epsilons;
  RunOutput out;
  out.report = residual_slope_experiment(st);
  return out;
}

int cmd_report(const RunConfig& cfg) {
  const fs::path dir(cfg.report_dir);
  const auto j = nlohmann::json::parse(io::read_text(dir / "summary.json"));
  const std::string stored_hash = j.value("config_hash", "");
  const std::string canonical = j.value("canonical_config", "");
  if (stored_hash.empty() || fnv1a_hex(canonical) != stored_hash)
    throw ConfigError("summary.json config hash mismatch in " + dir.string());

  std::printf("run: %s\n", j.value("name", "?").c_str());
  std::printf("config hash: %s\n", stored_hash.c_str());
  if (j.value("aborted", false))
    std::printf("ABORTED: %s\n", j.value("abort_note", "").c_str());
  if (j.contains("params"))
    for (const auto& [k, v] : j["params"].items())
      std::printf("  param %-18s %.17g\n", k.c_str(), v.get<double>());
  if (j.contains("fitted"))
    for (const auto& [k, v] : j["fitted"].items())
      std::printf("  fitted %-17s %.17g\n", k.c_str(), v.get<double>());
  bool all = !j.value("aborted", false);
  for (const auto& v : j["verdicts"]) {
    const bool pass = v["pass"].get<bool>();
    all = all && pass;
    std::printf("[%s] %-34s measured=%.6g tolerance=%.6g\n", pass ? "PASS" : "FAIL",
                v["criterion"].get<std::string>().c_str(), v["measured"].get<double>(),
                v["tolerance"].get<double>());
  }
  return all ? 0 : 1;
}

int execute(const RunConfig& cfg) {
  if (cfg.subcommand == "report") return cmd_report(cfg);

  RunOutput out;
  if (cfg.subcommand == "wave") out = cmd_wave(cfg);
  else if (cfg.subcommand == "spectrum") out = cmd_spectrum(cfg);
  else if (cfg.subcommand == "simulate") out = cmd_simulate(cfg);
  else if (cfg.subcommand == "pde") out = cmd_pde(cfg);
  else if (cfg.subcommand == "justify") out = cmd_justify(cfg);
  else if (cfg.subcommand == "stability") out = cmd_stability(cfg);
  else if (cfg.subcommand == "residuals") out = cmd_residuals(cfg);
  else throw ConfigError("unknown subcommand: " + cfg.subcommand);

  ExperimentReport& rep = out.report;
  rep.seed = cfg.seed;

  const fs::path dir = fs::path(cfg.out_dir) / run_id(cfg);
  fs::create_directories(dir);
  std::vector<std::string> curve_files;
  for (const Curve& c : rep.curves) {
    const auto path = io::write_curve(dir / "curves", c);
    curve_files.push_back(fs::relative(path, dir).string());
    if (cfg.svg && c.columns.size() >= 2 && !c.rows.empty()) {
      std::vector<int> ycols;
      for (size_t k = 1; k < std::min<size_t>(c.columns.size(), 5); ++k)
        ycols.push_back(static_cast<int>(k));
      io::write_text(dir / "curves" / (c.name + ".svg"), io::svg_line_chart(c, 0, ycols));
    }
  }
  for (const auto& [prof, stem] : out.profiles) io::write_profile(dir / "profiles", prof, stem);

  const auto j = io::report_to_json(rep, config_hash(cfg), canonical_config(cfg), curve_files);
  io::write_text(dir / "summary.json", j.dump(2) + "\n");

  for (const auto& v : rep.verdicts)
    std::printf("[%s] %-34s measured=%.6g tolerance=%.6g\n", v.pass ? "PASS" : "FAIL",
                v.criterion.c_str(), v.measured, v.tolerance);
  if (rep.aborted) std::printf("ABORTED: %s\n", rep.abort_note.c_str());
  std::printf("artifacts: %s\n", dir.string().c_str());

  if (rep.aborted) return 3;
  return rep.all_pass() ? 0 : 1;
}

void add_options(CLI::App* sub, std::vector<std::pair<std::string, std::string>>* sets,
                 std::optional<std::string>* config_path, bool* print_config) {
  auto bind = [sub, sets](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [sets, key](const std::string& v) { sets->emplace_back(key, v); }, help);
  };
  sub->add_option("--config", *config_path, "key = value configuration file");
  sub->add_flag("--print-config", *print_config, "echo the resolved configuration and exit");
  bind("--lambda", "lambda", "scaled speed parameter (> 1)");
  bind("--epsilon", "epsilon", "anharmonicity exponent parameter");
  bind("--v0", "v0", "precompression amplitude");
  bind("--cutoff-p", "cutoff_p", "Fourier splitting exponent in (5/8, 6/8)");
  bind("--family", "family", "force family: hertz-log | power");
  bind("--power-p", "power_p", "power-family exponent (integer >= 2)");
  bind("--grid-n", "grid_n", "grid override: points (power of two)");
  bind("--half-width", "half_width", "grid override: half width");
  bind("--ring-sites", "ring_sites", "lattice ring size override");
  bind("--dt", "dt", "lattice time step");
  bind("--dtau", "dtau", "PDE time step");
  bind("--t-end", "t_end", "simulate horizon");
  bind("--tau-end", "tau_end", "PDE horizon");
  bind("--checkpoint-dt", "checkpoint_dt", "checkpoint spacing");
  bind("--delta", "delta", "perturbation size");
  bind("--tau0", "tau0", "stability horizon (times eps^-3)");
  bind("--tau1", "tau1", "justification horizon (times eps^-3)");
  bind("--err-ceiling", "err_ceiling", "stability verdict ceiling");
  bind("--epsilons", "epsilons", "sweep list, e.g. [0.05, 0.1, 0.2]");
  bind("--perturbation", "perturbation", "gaussian | single-site | phase-shift");
  bind("--flux", "flux", "PDE flux: background-g | vlogv | power");
  bind("--source", "source", "justification reference: stationary | pde-run");
  bind("--seed", "seed", "random seed");
  bind("--workers", "workers", "worker pool size");
  bind("--out", "out", "output directory");
  sub->add_flag_function(
      "--svg", [sets](std::int64_t) { sets->emplace_back("svg", "true"); },
      "also write SVG charts");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"numerical laboratory: travelling waves and log-KdV dynamics of "
               "precompressed Hertzian chains"};
  app.require_subcommand(0, 1);

  std::vector<std::pair<std::string, std::string>> sets;
  std::optional<std::string> config_path;
  bool print_config = false;
  std::optional<std::string> report_dir;

  static const char* names[] = {"wave",    "spectrum",  "simulate",  "pde",
                                "justify", "stability", "residuals", "report"};
  static const char* descs[] = {
      "solve the lattice travelling wave",
      "diagnose the linearized operators around the stationary profile",
      "integrate the lattice and monitor conservation",
      "integrate the continuum log-KdV flow",
      "lattice-vs-continuum justification experiment",
      "perturbed travelling-wave stability experiment",
      "ansatz residual decay sweep",
      "print the verdict table of a finished run"};
  for (int i = 0; i < 8; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    add_options(sub, &sets, &config_path, &print_config);
    if (std::string(names[i]) == "report")
      sub->add_option("--dir", report_dir, "run directory containing summary.json");
  }

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::puts(app.help().c_str());
    return 2;
  }

  RunConfig cfg = default_config();
  cfg.subcommand = subs.front()->get_name();
  try {
    if (config_path) apply_config_file(cfg, *config_path);
    for (const auto& [key, value] : sets) apply_key_value(cfg, key, value);
    if (report_dir) cfg.report_dir = *report_dir;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }

  if (print_config) {
    std::fputs(canonical_config(cfg).c_str(), stdout);
    return 0;
  }

  try {
    return execute(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "compute error: %s\n", e.what());
    return 3;
  }
}

}  // namespace lklab::cli
