#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nla/grid.hpp"

namespace nla {

enum class KernelFamily { gaussian, bump, shifted_bump, table };

/// Analytic mass-one kernel family. gaussian(sigma) and bump(r) are radially
/// symmetric; shifted_bump(r, z0) is bump translated by z0 along the first
/// axis; table kernels interpolate two-column samples (dim 1 only).
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  int dim = 1;
  double sigma = 1.0;   // gaussian
  double radius = 1.0;  // bump / shifted_bump
  double shift = 0.0;   // shifted_bump offset along axis 0
  std::vector<double> table_z, table_v;
  double norm_const = 1.0;  // multiplies the raw shape so the mass is one

  static KernelSpec gaussian(double sigma, int dim = 1);
  static KernelSpec bump(double radius, int dim = 1);
  static KernelSpec shifted_bump(double radius, double shift, int dim = 1);
  static KernelSpec table(std::vector<double> z, std::vector<double> v);
  static KernelSpec table_from_csv(const std::string& path);

  /// Parse "gaussian:1.0", "bump:1.0", "shifted_bump:1.0:0.5",
  /// "table:/path/to.csv".
  static KernelSpec parse(const std::string& text, int dim = 1);

  double evaluate(double x) const;
  double evaluate(double x, double y) const;

  /// Half-extent of the effective support about the kernel center
  /// (2*sigma for gaussian, r for bumps).
  double effective_radius() const;
  bool compact_support() const;
  std::string describe() const;

  /// Analytically pre-scaled spec: lambda^d * K(lambda x) as a new spec.
  KernelSpec prescaled(double lambda) const;
};

/// Mass-one discretization of a KernelSpec at scale lambda on a Grid.
/// values_i = lambda^d * spec(lambda * x_i), renormalized so the discrete
/// mass h^d * sum(values) is exactly one.
struct DiscreteKernel {
  Grid grid;
  std::vector<double> values;
  double scale = 1.0;
  KernelSpec source;
  /// DFT of the displacement-ordered values, cached for convolution.
  std::vector<std::complex<double>> spectrum;
};

/// Throws UnderresolvedKernel when the scaled effective width covers fewer
/// than 4 grid spacings per axis.
DiscreteKernel discretize(const KernelSpec& spec, const Grid& grid,
                          double lambda);

/// A = 1/2 * h^d sum values_i |x_i|^2; requires a radially symmetric kernel
/// discretized at scale 1.
double second_moment_A(const DiscreteKernel& k);

/// B_j = h^d sum values_i (x_i)_j.
std::vector<double> first_moment_B(const DiscreteKernel& k);

struct SymmetryReport {
  bool is_even = false;
  double odd_moment_max = 0.0;
};

/// Evaluates first moments and off-diagonal second moments of the discrete
/// kernel; is_even iff all are below 1e-10.
SymmetryReport check_symmetry(const DiscreteKernel& k);

/// Circular convolution with quadrature weight h^d (spectral path).
Field convolve(const DiscreteKernel& k, const Field& f);

/// O(n^2) direct-summation convolution, the cross-check oracle path.
Field convolve_direct(const DiscreteKernel& k, const Field& f);

/// lambda^2 * (convolve(k, f) - f).
Field nonlocal_operator(const DiscreteKernel& k, const Field& f,
                        double lambda);

/// Kernel with reflected argument, K(-z), discretized on the same grid.
DiscreteKernel reflect(const DiscreteKernel& k);

/// p-th absolute moment of the analytic spec at scale 1, by fine quadrature:
/// integral of spec(z) |z|^p dz.
double spec_abs_moment(const KernelSpec& spec, double p);

}  // namespace nla
