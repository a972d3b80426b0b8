#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nla/grid.hpp"
#include "nla/kernels.hpp"

namespace nla {

/// Parameters of the rescaled equation
///   u_t = lambda^2 (J_l * u - u) + lambda^(d(1-q)+2) (G_l * N(u) - N(u)),
/// N(u) = |u|^(q-1) u.
struct ModelParams {
  double q = 2.0;
  double lambda = 1.0;
  KernelSpec J_spec = KernelSpec::gaussian(1.0, 1);
  KernelSpec G_spec = KernelSpec::shifted_bump(1.0, 1.0, 1);
  int dim = 1;

  ModelParams() = default;
  ModelParams(double q, double lambda, KernelSpec J, KernelSpec G, int dim);

  double diffusion_prefactor() const { return lambda * lambda; }
  double convection_prefactor() const;
};

enum class Scheme { euler, rk4 };

struct StepperConfig {
  Scheme scheme = Scheme::rk4;
  double dt = 0.0;  // 0 = auto: safety / (2 l^2 + 2 q l^(d(1-q)+2) |u|_inf^(q-1))
  double safety = 0.5;
  double t_end = 1.0;
  std::vector<double> record_times;
  std::vector<double> tail_radii;  // radii whose tail mass is recorded
  double tail_tol = 1e-6;          // monitor threshold at R = L/2
  std::vector<double> p_extra;     // recorded lp norms beyond {1, 2}
};

/// Time series of everything the monitors watch. All lists share the length
/// of `times`.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> linf_series;
  std::map<double, std::vector<double>> lp_series;
  std::vector<double> energy_series;
  std::map<double, std::vector<double>> tail_series;
  std::vector<double> dudt_hm1_series;

  std::size_t size() const { return times.size(); }
  /// Value of lp_series[p] at the record index closest to time t
  /// (t must match a record time to 1e-9 relative).
  double lp_at(double p, double t) const;
  std::size_t index_of_time(double t) const;
};

/// CSV with columns t,mass,linf,l1,l2[,lp_<p>...],energy[,tail_<R>...],dudt_hm1.
void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path);

double auto_dt(const ModelParams& params, double linf, double safety);

/// Right-hand side of the rescaled equation; kernels must be discretized at
/// params.lambda on u.grid. mass(rhs) vanishes to roundoff.
Field rhs(const Field& u, const ModelParams& params, const DiscreteKernel& J,
          const DiscreteKernel& G);

/// One explicit Euler or classical RK4 update; advances time_tag by dt.
/// Throws StabilityViolation when the sup norm grows beyond the explicit
/// bound (dt too large).
Field step(const Field& u, double dt, const ModelParams& params,
           const DiscreteKernel& J, const DiscreteKernel& G, Scheme scheme);

/// Integrate to t_end recording at cfg.record_times; enforces the tail
/// monitor at R = L/2 against cfg.tail_tol.
std::pair<TrajectoryRecord, Field> evolve(const Field& u0,
                                          const ModelParams& params,
                                          const StepperConfig& cfg);

/// Integrate the local limit equation U_t = A Lap(U) - B . grad(|U|^(q-1)U)
/// with spectral derivatives on the periodic grid (diffusion handled by the
/// exact Fourier propagator, convection stepped explicitly). Same recording
/// contract as evolve.
std::pair<TrajectoryRecord, Field> solve_local_reference(
    const Field& u0, double A, const std::vector<double>& B, double q,
    const StepperConfig& cfg);

}  // namespace nla
