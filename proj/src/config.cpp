#include "lklab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lklab/experiments.hpp"

namespace lklab {
namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse real from '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer from '" + value + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::string body = trim(value);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw ConfigError("config key '" + key + "': expected a bracketed list");
  body = body.substr(1, body.size() - 2);
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_real(key, item));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

void apply_key_value(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = unquote(trim(raw_value));
  if (key == "lambda") cfg.model.lambda = parse_real(key, value);
  else if (key == "epsilon") cfg.model.epsilon = parse_real(key, value);
  else if (key == "v0") cfg.model.v0 = parse_real(key, value);
  else if (key == "cutoff_p") cfg.model.p_split = parse_real(key, value);
  else if (key == "ball_R") cfg.model.ball_R = parse_real(key, value);
  else if (key == "ball_r") cfg.model.ball_r = parse_real(key, value);
  else if (key == "family") {
    if (value == "hertz-log") cfg.model.family = ForceFamily::hertz_log;
    else if (value == "power") cfg.model.family = ForceFamily::power;
    else throw ConfigError("config key 'family': expected hertz-log or power, got '" + value + "'");
  } else if (key == "power_p") cfg.model.power_p = static_cast<int>(parse_int(key, value));
  else if (key == "grid_n") cfg.grid_n = static_cast<int>(parse_int(key, value));
  else if (key == "half_width") cfg.half_width = parse_real(key, value);
  else if (key == "ring_sites") cfg.ring_sites = static_cast<int>(parse_int(key, value));
  else if (key == "dt") cfg.dt = parse_real(key, value);
  else if (key == "dtau") cfg.dtau = parse_real(key, value);
  else if (key == "t_end") cfg.t_end = parse_real(key, value);
  else if (key == "tau_end") cfg.tau_end = parse_real(key, value);
  else if (key == "checkpoint_dt") cfg.checkpoint_dt = parse_real(key, value);
  else if (key == "delta") cfg.delta = parse_real(key, value);
  else if (key == "tau0") cfg.tau0 = parse_real(key, value);
  else if (key == "tau1") cfg.tau1 = parse_real(key, value);
  else if (key == "err_ceiling") cfg.err_ceiling = parse_real(key, value);
  else if (key == "epsilons") cfg.epsilons = parse_list(key, value);
  else if (key == "perturbation") cfg.perturbation = value;
  else if (key == "flux") cfg.flux = value;
  else if (key == "source") cfg.source = value;
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, value));
  else if (key == "out") cfg.out_dir = value;
  else if (key == "svg") cfg.svg = parse_bool(key, value);
  else throw ConfigError("unknown config key: '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    apply_key_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void validate(const RunConfig& cfg) {
  static const std::set<std::string> subcommands = {
      "wave", "spectrum", "simulate", "pde", "justify", "stability", "residuals", "report"};
  if (!subcommands.count(cfg.subcommand))
    throw ConfigError("unknown subcommand: '" + cfg.subcommand + "'");

  if (!(cfg.model.lambda > 1.0))
    throw ConfigError("key 'lambda': need lambda > 1, got " + fmt(cfg.model.lambda));
  if (!(cfg.model.epsilon > 0.0 && cfg.model.epsilon < 1.0))
    throw ConfigError("key 'epsilon': need epsilon in (0, 1), got " + fmt(cfg.model.epsilon));
  if (!(cfg.model.p_split > 5.0 / 8.0 && cfg.model.p_split < 6.0 / 8.0))
    throw ConfigError("key 'cutoff_p': need a value in (5/8, 6/8), got " + fmt(cfg.model.p_split));
  if (!(cfg.model.ball_r > -1.0 && cfg.model.ball_r < 0.0))
    throw ConfigError("key 'ball_r': need a value in (-1, 0), got " + fmt(cfg.model.ball_r));
  if (!(cfg.model.v0 > 0.0))
    throw ConfigError("key 'v0': need v0 > 0, got " + fmt(cfg.model.v0));
  if (cfg.model.family == ForceFamily::power && cfg.model.power_p < 2)
    throw ConfigError("key 'power_p': need an integer >= 2");

  const bool solves_wave = cfg.subcommand == "wave" || cfg.subcommand == "simulate" ||
                           cfg.subcommand == "justify" || cfg.subcommand == "stability" ||
                           cfg.subcommand == "residuals";
  if (solves_wave && cfg.model.epsilon > 0.25)
    throw ConfigError("key 'epsilon': the travelling-wave solver supports epsilon <= 0.25, got " +
                      fmt(cfg.model.epsilon));
  for (double e : cfg.epsilons)
    if (!(e > 0.0 && e <= 0.25))
      throw ConfigError("key 'epsilons': every entry must lie in (0, 0.25], got " + fmt(e));

  if (!(cfg.dt > 0.0)) throw ConfigError("key 'dt': need dt > 0");
  if (!(cfg.dtau > 0.0)) throw ConfigError("key 'dtau': need dtau > 0");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("key 't_end': need t_end >= 0");
  if (!(cfg.tau_end > 0.0)) throw ConfigError("key 'tau_end': need tau_end > 0");
  if (!(cfg.checkpoint_dt > 0.0)) throw ConfigError("key 'checkpoint_dt': need a positive spacing");
  if (!(cfg.delta >= 0.0)) throw ConfigError("key 'delta': need delta >= 0");
  if (!(cfg.tau0 > 0.0)) throw ConfigError("key 'tau0': need tau0 > 0");
  if (!(cfg.tau1 > 0.0)) throw ConfigError("key 'tau1': need tau1 > 0");
  if (!(cfg.err_ceiling > 0.0)) throw ConfigError("key 'err_ceiling': need a positive ceiling");
  if (cfg.workers < 1) throw ConfigError("key 'workers': need at least one worker");
  if (cfg.grid_n < 0 || (cfg.grid_n > 0 && (cfg.grid_n & (cfg.grid_n - 1)) != 0))
    throw ConfigError("key 'grid_n': need a power of two (or 0 for the default)");
  if (cfg.half_width < 0.0) throw ConfigError("key 'half_width': need a value >= 0");
  if (cfg.ring_sites < 0 || (cfg.ring_sites > 0 && cfg.ring_sites % 2 != 0))
    throw ConfigError("key 'ring_sites': need an even count (or 0 for the default)");

  try {
    perturbation_from_name(cfg.perturbation);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("key 'perturbation': ") + e.what());
  }
  if (cfg.flux != "background-g" && cfg.flux != "vlogv" && cfg.flux != "power")
    throw ConfigError("key 'flux': expected background-g, vlogv or power, got '" + cfg.flux + "'");
  if (cfg.source != "stationary" && cfg.source != "pde-run")
    throw ConfigError("key 'source': expected stationary or pde-run, got '" + cfg.source + "'");
  if (cfg.subcommand == "report" && cfg.report_dir.empty())
    throw ConfigError("subcommand 'report' needs --dir");
}

std::string canonical_config(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("ball_R", fmt(cfg.model.ball_R));
  kv.emplace_back("ball_r", fmt(cfg.model.ball_r));
  kv.emplace_back("checkpoint_dt", fmt(cfg.checkpoint_dt));
  kv.emplace_back("cutoff_p", fmt(cfg.model.p_split));
  kv.emplace_back("delta", fmt(cfg.delta));
  kv.emplace_back("dt", fmt(cfg.dt));
  kv.emplace_back("dtau", fmt(cfg.dtau));
  std::string eps = "[";
  for (size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (i) eps += ", ";
    eps += fmt(cfg.epsilons[i]);
  }
  eps += "]";
  kv.emplace_back("epsilon", fmt(cfg.model.epsilon));
  kv.emplace_back("epsilons", eps);
  kv.emplace_back("err_ceiling", fmt(cfg.err_ceiling));
  kv.emplace_back("family", cfg.model.family == ForceFamily::hertz_log ? "hertz-log" : "power");
  kv.emplace_back("flux", cfg.flux);
  kv.emplace_back("grid_n", std::to_string(cfg.grid_n));
  kv.emplace_back("half_width", fmt(cfg.half_width));
  kv.emplace_back("lambda", fmt(cfg.model.lambda));
  kv.emplace_back("perturbation", cfg.perturbation);
  kv.emplace_back("power_p", std::to_string(cfg.model.power_p));
  kv.emplace_back("ring_sites", std::to_string(cfg.ring_sites));
  kv.emplace_back("seed", std::to_string(cfg.seed));
  kv.emplace_back("source", cfg.source);
  kv.emplace_back("subcommand", cfg.subcommand);
  kv.emplace_back("svg", cfg.svg ? "true" : "false");
  kv.emplace_back("t_end", fmt(cfg.t_end));
  kv.emplace_back("tau0", fmt(cfg.tau0));
  kv.emplace_back("tau1", fmt(cfg.tau1));
  kv.emplace_back("tau_end", fmt(cfg.tau_end));
  kv.emplace_back("v0", fmt(cfg.model.v0));
  kv.emplace_back("workers", std::to_string(cfg.workers));

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(canonical_config(cfg)); }

}  // namespace lklab
