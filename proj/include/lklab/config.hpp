#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lklab/nonlinear.hpp"

namespace lklab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully resolved run settings. Resolution order: documented defaults, then
// the config file (key = value lines, '#' comments, lists in brackets), then
// command-line flags.
struct RunConfig {
  std::string subcommand;

  ModelParams model;

  // grid overrides; 0 keeps the module defaults
  int grid_n = 0;
  double half_width = 0.0;
  int ring_sites = 0;

  // integrator settings
  double dt = 0.05;
  double dtau = 5e-4;
  double t_end = 100.0;
  double tau_end = 1.0;
  double checkpoint_dt = 1.0;

  // experiment settings
  double delta = 1e-3;
  double tau0 = 1.0;
  double tau1 = 1.0;
  double err_ceiling = 10.0;
  std::vector<double> epsilons;  // sweep list; empty keeps per-experiment defaults
  std::string perturbation = "gaussian";
  std::string flux = "background-g";
  std::string source = "stationary";
  std::uint64_t seed = 42;

  int workers = 1;
  std::string out_dir = "results";
  std::string report_dir;
  bool print_config = false;
  bool svg = false;
};

RunConfig default_config();

// applies one documented key; throws ConfigError naming the key otherwise
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// reads the file and applies every key it contains
void apply_config_file(RunConfig& cfg, const std::string& path);

// checks module preconditions up front; throws ConfigError
void validate(const RunConfig& cfg);

// deterministic "key = value" listing (sorted keys), used for hashing and
// --print-config
std::string canonical_config(const RunConfig& cfg);

// 16 hex digits, FNV-1a over the canonical listing
std::string config_hash(const RunConfig& cfg);

std::string fnv1a_hex(const std::string& s);

}  // namespace lklab
