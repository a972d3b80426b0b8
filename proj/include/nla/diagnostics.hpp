#pragma once

#include <utility>
#include <vector>

#include "nla/grid.hpp"
#include "nla/kernels.hpp"
#include "nla/solver.hpp"

namespace nla {

/// Least-squares line through (log t, log y) samples.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
};

/// Plain linear least squares on (x, y); r_squared = 1 for a degenerate
/// (constant) response.
FitResult linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y);

/// Time-integrated nonlocal energy on a window.
struct EnergyReport {
  double lambda = 0.0;
  std::pair<double, double> t_window{0.0, 0.0};
  double value = 0.0;
  std::vector<double> per_time;
  std::vector<double> times;
};

/// lambda^2 * iint J_l(x-y) (u(x)-u(y))^2 dx dy via the mass-one identity
/// iint J(x-y)(u(x)-u(y))^2 = 2 (int u^2 - int u (J*u)).
double nonlocal_energy(const Field& u, const DiscreteKernel& k, double lambda);

/// O(n^2) double-summation oracle for nonlocal_energy.
double nonlocal_energy_direct(const Field& u, const DiscreteKernel& k,
                              double lambda);

/// n^p * iint rho_n(x-y) |f(x)-f(y)|^p dx dy by direct summation over the
/// kernel support. Non-compact rho is accepted only for p = 2 (spectral
/// identity path).
double bbm_functional(const Field& f, const DiscreteKernel& rho, double n,
                      double p);

struct DominationReport {
  std::vector<double> n_values;
  std::vector<double> ratios;   // functional / (int rho |z|^p * int |grad f|^p)
  double max_ratio = 0.0;
  double rhs = 0.0;             // int rho(z)|z|^p dz * int |grad f|^p
};

/// Checks bbm_functional(f, rho_n, n, p) <= int rho|z|^p * int |grad f|^p
/// for every n in n_list (the nonlocal-dominated-by-Dirichlet inequality).
DominationReport dirichlet_domination_check(const Field& f,
                                            const KernelSpec& rho,
                                            const std::vector<double>& n_list,
                                            double p);

/// Least-squares decay exponent of log ||u(t)||_p against log t inside the
/// window; requires at least 5 record times there. p may be infinity.
FitResult decay_fit(const TrajectoryRecord& rec, double p,
                    std::pair<double, double> window);

/// t^{(d/2)(1-1/p)} ||u - U||_p; time tags must agree.
double renormalized_error(const Field& u, const Field& U, double p);

struct KernelLimitReport {
  std::vector<double> lambdas;
  std::vector<double> errors;
  std::vector<double> bounds;   // filled by the G check
  double fitted_order = 0.0;    // filled by the J check
  bool decreasing = false;
  bool bounds_hold = false;
};

/// err(l) = || l^2 (J_l * psi - psi) - A Lap psi ||_inf for each l, with the
/// convergence order fitted in 1/l.
KernelLimitReport kernel_limit_check_J(const KernelSpec& J, const Field& psi,
                                       double A,
                                       const std::vector<double>& lambda_list);

/// Checks |l (G~_l * psi - psi) - B.grad psi| <= (1+tol) |D^2 psi|_inf / l
/// + discretization floor, G~(z) = G(-z).
KernelLimitReport kernel_limit_check_G(const KernelSpec& G, const Field& psi,
                                       const std::vector<double>& B,
                                       const std::vector<double>& lambda_list,
                                       double tol = 0.1);

struct TailBoundReport {
  std::vector<double> lambdas;
  std::vector<double> fitted_C;  // least C per lambda
  double C_global = 0.0;
  double spread = 1.0;           // max/min over positive per-lambda constants
  bool lambda_uniform = false;   // spread <= 1.5
};

/// Fits the least C with tail_{u_l}(t, 2R) <= tail_phi(R) + C (t/R^2 +
/// sqrt(t)/R) over all recorded (lambda, t, R) samples.
TailBoundReport tail_bound_check(
    const std::vector<std::pair<double, const TrajectoryRecord*>>& records,
    const Field& phi, const std::vector<double>& R_list,
    const std::vector<double>& t_list);

/// H^{-1} norm of du/dt given the assembled right-hand side.
double dudt_hminus1(const Field& u, const Field& rhs);

/// Left-rectangle quadrature of a recorded series over [t1, t2].
double integrate_series(const std::vector<double>& times,
                        const std::vector<double>& values, double t1,
                        double t2, int stride = 1);

/// EnergyReport for a trajectory on [t1, t2].
EnergyReport energy_report(double lambda, const TrajectoryRecord& rec,
                           double t1, double t2);

}  // namespace nla
