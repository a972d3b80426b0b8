#pragma once

#include <string>
#include <vector>

#include "nla/grid.hpp"
#include "nla/kernels.hpp"
#include "nla/solver.hpp"

namespace nla {

/// Flat key = value configuration for the experiment drivers.
struct ExperimentConfig {
  std::string experiment;

  // model
  int dim = 1;
  double q = 2.0;
  double lambda = 1.0;
  std::string kernel_J = "gaussian:1.0";
  std::string kernel_G = "shifted_bump:1.0:1.0";
  std::string kernel_rho = "bump:1.0";

  // grid
  int n = 2048;
  double half_width = 60.0;

  // stepper
  std::string scheme = "rk4";
  double dt = 0.0;  // 0 = auto
  double safety = 0.5;
  double t_end = 200.0;
  std::vector<double> record_times;  // explicit override; empty = driver picks
  double record_t_min = 1.0;
  int record_per_octave = 2;

  // sweeps
  std::vector<double> lambda_list = {1, 2, 4, 8};
  std::vector<double> R_list = {5, 10, 20};
  std::vector<double> t_list = {1, 4, 16};
  std::vector<double> p_list = {1, 2};
  std::vector<double> n_list = {8, 16, 32};

  // initial data: "gaussian:<sigma>[:<center>]" or "two_bump"
  std::string initial = "gaussian:1.0";
  double mass = 1.0;

  // windows
  double fit_t_lo = 10.0;
  double fit_t_hi = 200.0;
  double window_t1 = 1.0;
  double window_t2 = 2.0;

  std::string out_dir = "out";
  unsigned long long seed = 1234;
  double tail_tol = 1e-6;
};

/// Parse an INI-like file of `key = value` lines, '#' comments, UTF-8.
/// Unknown keys raise ConfigError naming the key.
ExperimentConfig parse_config_file(const std::string& path);

/// Apply a single "key=value" override.
void apply_override(ExperimentConfig& cfg, const std::string& spec);

/// Validate cross-field constraints (sorted lambda_list, known experiment
/// when set, resolvable kernels, ...). Throws ConfigError.
void validate(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_names();

}  // namespace nla
