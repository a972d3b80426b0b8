#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nla/config.hpp"
#include "nla/grid.hpp"
#include "nla/solver.hpp"

namespace nla {

struct VerdictLine {
  bool pass = false;
  std::string text;
};

struct RunResult {
  std::vector<VerdictLine> verdicts;
  bool all_pass() const;
};

/// Execute the configured experiment: writes summary.csv, per-run trajectory
/// CSVs and verdict.txt under cfg.out_dir. Returns 0 when every in-scope
/// bound holds, 1 otherwise. Config and runtime failures throw.
int run(const ExperimentConfig& cfg);

// Individual drivers (same artifact contract as run()).
RunResult run_decay(const ExperimentConfig& cfg);
RunResult run_asymptotics(const ExperimentConfig& cfg);
RunResult run_scaling_identity(const ExperimentConfig& cfg);
RunResult run_kernel_limits(const ExperimentConfig& cfg);
RunResult run_energy_bounds(const ExperimentConfig& cfg);
RunResult run_tail_bounds(const ExperimentConfig& cfg);
RunResult run_compactness_functionals(const ExperimentConfig& cfg);
RunResult run_profile_residuals(const ExperimentConfig& cfg);

/// phi_lambda(x) = lambda^d phi(lambda x) sampled analytically from the
/// initial-data menu ("gaussian:<sigma>[:<center>]" or "two_bump").
Field initial_field(const std::string& initial, double mass, const Grid& grid,
                    double lambda);

/// Geometric record times t_k = t_min * 2^(k/per_octave) up to t_end,
/// with t_end appended.
std::vector<double> geometric_times(double t_min, int per_octave,
                                    double t_end);

/// Decade-graded times t_min * 10^(k/4) up to t_end, with t_end appended.
std::vector<double> decade_times(double t_min, double t_end);

/// Real band-limited field with seeded spectrum (modes up to n/8),
/// normalized to unit sup norm. Deterministic across runs.
Field random_band_limited(const Grid& grid, std::uint64_t seed);

/// Worker pool over [0, count); size capped by NLA_THREADS.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn);

}  // namespace nla
