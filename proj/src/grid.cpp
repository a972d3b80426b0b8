#include "nla/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "nla/errors.hpp"
#include "nla/fft.hpp"

namespace nla {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim_, int n, double L) : dim(dim_), n_per_axis(n), half_width(L) {
  if (dim != 1 && dim != 2)
    throw InvalidArgument("Grid: dim must be 1 or 2");
  if (!power_of_two(n) || n < 64)
    throw InvalidArgument("Grid: n_per_axis must be a power of two >= 64");
  if (!(L > 0)) throw InvalidArgument("Grid: half_width must be positive");
  spacing = 2.0 * L / n;
}

std::size_t Grid::point_count() const {
  std::size_t n = static_cast<std::size_t>(n_per_axis);
  return dim == 1 ? n : n * n;
}

double Grid::cell_volume() const {
  return dim == 1 ? spacing : spacing * spacing;
}

Field::Field(const Grid& g, std::vector<double> vals, double t)
    : grid(g), values(std::move(vals)), time_tag(t) {
  if (values.size() != g.point_count())
    throw InvalidArgument("Field: values length does not match grid");
}

Field Field::zeros(const Grid& g, double t) {
  return Field(g, std::vector<double>(g.point_count(), 0.0), t);
}

Field Field::constant(const Grid& g, double c, double t) {
  return Field(g, std::vector<double>(g.point_count(), c), t);
}

Field Field::from_function(const Grid& g,
                           const std::function<double(double)>& fn, double t) {
  if (g.dim != 1) throw InvalidArgument("from_function: 1-d sampler on 2-d grid");
  std::vector<double> v(g.point_count());
  for (int i = 0; i < g.n_per_axis; ++i) v[i] = fn(g.coord(i));
  Field f(g, std::move(v), t);
  require_finite(f, "from_function");
  return f;
}

Field Field::from_function(const Grid& g,
                           const std::function<double(double, double)>& fn,
                           double t) {
  if (g.dim != 2) throw InvalidArgument("from_function: 2-d sampler on 1-d grid");
  std::vector<double> v(g.point_count());
  for (int ix = 0; ix < g.n_per_axis; ++ix)
    for (int iy = 0; iy < g.n_per_axis; ++iy)
      v[static_cast<std::size_t>(ix) * g.n_per_axis + iy] =
          fn(g.coord(ix), g.coord(iy));
  Field f(g, std::move(v), t);
  require_finite(f, "from_function");
  return f;
}

void require_finite(const Field& f, const std::string& who) {
  for (double v : f.values)
    if (!std::isfinite(v))
      throw InvalidArgument(who + ": field holds a non-finite value");
}

double mass(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return f.grid.cell_volume() * s;
}

double lp_norm(const Field& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must satisfy p >= 1");
  double s = 0.0;
  if (p == 1.0) {
    for (double v : f.values) s += std::abs(v);
  } else if (p == 2.0) {
    for (double v : f.values) s += v * v;
  } else {
    for (double v : f.values) s += std::pow(std::abs(v), p);
  }
  return std::pow(f.grid.cell_volume() * s, 1.0 / p);
}

double tail_mass(const Field& f, double R) {
  const Grid& g = f.grid;
  if (!(R > 0.0) || R >= g.half_width)
    throw InvalidArgument("tail_mass: radius must satisfy 0 < R < L");
  double s = 0.0;
  if (g.dim == 1) {
    for (int i = 0; i < g.n_per_axis; ++i)
      if (std::abs(g.coord(i)) > R) s += f.at(i);
  } else {
    for (int ix = 0; ix < g.n_per_axis; ++ix) {
      const double x = g.coord(ix);
      for (int iy = 0; iy < g.n_per_axis; ++iy) {
        const double y = g.coord(iy);
        if (std::hypot(x, y) > R) s += f.at(ix, iy);
      }
    }
  }
  return g.cell_volume() * s;
}

namespace {

// Periodic cubic B-spline coefficients: solve (c * b)(i) = f(i) along one
// axis via the DFT of the B-spline symbol (4 + 2 cos(2 pi k / n)) / 6.
void prefilter_axis(fft::cvec& data, std::size_t rows, std::size_t cols,
                    bool along_cols) {
  const std::size_t n = along_cols ? cols : rows;
  std::vector<double> symbol(n);
  for (std::size_t k = 0; k < n; ++k)
    symbol[k] =
        (4.0 + 2.0 * std::cos(2.0 * M_PI * static_cast<double>(k) / n)) / 6.0;
  if (along_cols) {
    for (std::size_t r = 0; r < rows; ++r) {
      fft::transform(data.data() + r * cols, cols, -1);
      for (std::size_t k = 0; k < cols; ++k) data[r * cols + k] /= symbol[k];
      fft::transform(data.data() + r * cols, cols, +1);
      for (std::size_t k = 0; k < cols; ++k)
        data[r * cols + k] /= static_cast<double>(cols);
    }
  } else {
    fft::cvec col(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) col[r] = data[r * cols + c];
      fft::transform(col.data(), rows, -1);
      for (std::size_t k = 0; k < rows; ++k) col[k] /= symbol[k];
      fft::transform(col.data(), rows, +1);
      for (std::size_t r = 0; r < rows; ++r)
        data[r * cols + c] = col[r] / static_cast<double>(rows);
    }
  }
}

inline void bspline_weights(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
  w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
  w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
  w[3] = t3 / 6.0;
}

inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

Field rescale_field(const Field& f, double lambda, const Grid& target) {
  const Grid& src = f.grid;
  if (target.dim != src.dim)
    throw InvalidArgument("rescale_field: dimension mismatch");
  if (!(lambda >= 1.0))
    throw InvalidArgument("rescale_field: lambda must satisfy lambda >= 1");
  if (lambda * target.half_width > src.half_width * (1.0 + 1e-12))
    throw InvalidArgument(
        "rescale_field: lambda * target half_width exceeds the source box");

  // Identity fast path keeps lambda = 1 with matching grids bit-exact.
  if (lambda == 1.0 && target == src) {
    Field g = f;
    return g;
  }

  const int n = src.n_per_axis;
  const double jac = src.dim == 1 ? lambda : lambda * lambda;

  fft::cvec coef(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) coef[i] = f.values[i];
  if (src.dim == 1) {
    prefilter_axis(coef, 1, static_cast<std::size_t>(n), true);
  } else {
    prefilter_axis(coef, n, n, true);
    prefilter_axis(coef, n, n, false);
  }

  auto axis_setup = [&](double x, int& base, double wts[4]) {
    const double u = (x + src.half_width) / src.spacing;
    double fl = std::floor(u);
    bspline_weights(u - fl, wts);
    base = static_cast<int>(fl);
  };

  Field out = Field::zeros(target, f.time_tag / (lambda * lambda));
  if (src.dim == 1) {
    for (int i = 0; i < target.n_per_axis; ++i) {
      int base;
      double w[4];
      axis_setup(lambda * target.coord(i), base, w);
      double acc = 0.0;
      for (int j = 0; j < 4; ++j)
        acc += w[j] * coef[wrap(base - 1 + j, n)].real();
      out.at(i) = jac * acc;
    }
  } else {
    for (int ix = 0; ix < target.n_per_axis; ++ix) {
      int bx;
      double wx[4];
      axis_setup(lambda * target.coord(ix), bx, wx);
      for (int iy = 0; iy < target.n_per_axis; ++iy) {
        int by;
        double wy[4];
        axis_setup(lambda * target.coord(iy), by, wy);
        double acc = 0.0;
        for (int jx = 0; jx < 4; ++jx) {
          const std::size_t row =
              static_cast<std::size_t>(wrap(bx - 1 + jx, n)) * n;
          double rowacc = 0.0;
          for (int jy = 0; jy < 4; ++jy)
            rowacc += wy[jy] * coef[row + wrap(by - 1 + jy, n)].real();
          acc += wx[jx] * rowacc;
        }
        out.at(ix, iy) = jac * acc;
      }
    }
  }
  return out;
}

double box_frequency(const Grid& g, int k) {
  const int n = g.n_per_axis;
  const int ks = k < n / 2 ? k : k - n;
  return M_PI * static_cast<double>(ks) / g.half_width;
}

double h_minus1_norm(const Field& f) {
  const Grid& g = f.grid;
  const std::size_t n = static_cast<std::size_t>(g.n_per_axis);
  fft::cvec a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.values[i];

  double acc = 0.0;
  if (g.dim == 1) {
    fft::forward(a);
    for (std::size_t k = 0; k < n; ++k) {
      const double kap = box_frequency(g, static_cast<int>(k));
      acc += std::norm(a[k]) / (1.0 + kap * kap);
    }
  } else {
    fft::forward_2d(a, n, n);
    for (std::size_t kx = 0; kx < n; ++kx) {
      const double kapx = box_frequency(g, static_cast<int>(kx));
      for (std::size_t ky = 0; ky < n; ++ky) {
        const double kapy = box_frequency(g, static_cast<int>(ky));
        acc += std::norm(a[kx * n + ky]) / (1.0 + kapx * kapx + kapy * kapy);
      }
    }
  }
  // Parseval scaling: |f_hat|^2 = (h^d/n^d) |DFT|^2.
  const double scale = g.cell_volume() / static_cast<double>(g.point_count());
  return std::sqrt(scale * acc);
}

void write_field_csv(const Field& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("write_field_csv: cannot open " + path);
  const Grid& g = f.grid;
  if (g.dim == 1) {
    std::fputs("x,value\n", fp);
    for (int i = 0; i < g.n_per_axis; ++i)
      std::fprintf(fp, "%.17g,%.17g\n", g.coord(i), f.at(i));
  } else {
    std::fputs("x,y,value\n", fp);
    for (int ix = 0; ix < g.n_per_axis; ++ix)
      for (int iy = 0; iy < g.n_per_axis; ++iy)
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", g.coord(ix), g.coord(iy),
                     f.at(ix, iy));
  }
  std::fclose(fp);
}

Field operator+(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("Field +: grid mismatch");
  Field out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += b.values[i];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("Field -: grid mismatch");
  Field out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] -= b.values[i];
  return out;
}

Field operator*(double s, const Field& a) {
  Field out = a;
  for (double& v : out.values) v *= s;
  return out;
}

double inner_product(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("inner_product: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    s += a.values[i] * b.values[i];
  return a.grid.cell_volume() * s;
}

}  // namespace nla
