#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace nla {

/// Uniform periodic grid on [-L, L)^dim with n_per_axis points per axis.
/// Coordinates are x_i = -L + i*h with h = 2L/n_per_axis.
struct Grid {
  int dim = 1;
  int n_per_axis = 64;
  double half_width = 1.0;
  double spacing = 0.0;

  Grid() = default;
  Grid(int dim, int n_per_axis, double half_width);

  std::size_t point_count() const;
  double coord(int i) const { return -half_width + i * spacing; }
  double cell_volume() const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && n_per_axis == o.n_per_axis &&
           half_width == o.half_width;
  }
};

/// Real-valued samples of u(t, .) on a Grid. Layout is row-major with the
/// last axis contiguous: index = ix*n + iy in two dimensions.
struct Field {
  Grid grid;
  std::vector<double> values;
  double time_tag = 0.0;

  Field() = default;
  Field(const Grid& g, std::vector<double> vals, double t = 0.0);

  static Field zeros(const Grid& g, double t = 0.0);
  static Field constant(const Grid& g, double c, double t = 0.0);
  /// Sample fn(x) (dim 1) on the grid.
  static Field from_function(const Grid& g,
                             const std::function<double(double)>& fn,
                             double t = 0.0);
  /// Sample fn(x, y) (dim 2) on the grid.
  static Field from_function(const Grid& g,
                             const std::function<double(double, double)>& fn,
                             double t = 0.0);

  double& at(int ix) { return values[static_cast<std::size_t>(ix)]; }
  double at(int ix) const { return values[static_cast<std::size_t>(ix)]; }
  double& at(int ix, int iy) {
    return values[static_cast<std::size_t>(ix) * grid.n_per_axis + iy];
  }
  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(ix) * grid.n_per_axis + iy];
  }
};

/// Throws InvalidArgument if the field holds a NaN or Inf.
void require_finite(const Field& f, const std::string& who);

/// Discrete integral h^d * sum(values).
double mass(const Field& f);

/// (h^d sum |v|^p)^(1/p) for finite p >= 1, max|v| for p = inf.
double lp_norm(const Field& f, double p);

/// h^d * sum over |x_i| > R of values; requires 0 < R < L.
double tail_mass(const Field& f, double R);

/// g(x) = lambda^d f(lambda x) sampled on `target` through periodic cubic
/// (B-spline) interpolation; g.time_tag = f.time_tag / lambda^2.
/// Requires lambda >= 1 and lambda * target.half_width <= f.grid.half_width.
Field rescale_field(const Field& f, double lambda, const Grid& target);

/// Spectral H^{-1} norm: (sum_k |f_hat(k)|^2 / (1+|kappa_k|^2))^(1/2) with
/// f_hat normalized so that Parseval matches lp_norm(f, 2) and
/// kappa_k = pi*k/L the box frequencies.
double h_minus1_norm(const Field& f);

/// Signed box frequency for index k on an n-point axis: pi*k_signed/L.
double box_frequency(const Grid& g, int k);

/// Field snapshot CSV: header "x[,y],value", coordinates ascending, full
/// double precision.
void write_field_csv(const Field& f, const std::string& path);

// Elementwise helpers used across the library (fixed summation order).
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
double inner_product(const Field& a, const Field& b);  // h^d sum a*b

}  // namespace nla
