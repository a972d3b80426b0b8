#include "nla/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nla/errors.hpp"
#include "nla/fft.hpp"

namespace nla {

namespace {

// Raw bump shape on the unit ball, exp(-1/(1-|w|^2)) for |w| < 1.
inline double unit_bump(double r2) {
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

// integral of exp(-1/(1-w^2)) over [-1,1]; the integrand vanishes with all
// derivatives at the endpoints, so the trapezoid rule converges spectrally.
double unit_bump_mass_1d() {
  static const double value = [] {
    const int n = 1 << 14;
    const double h = 2.0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = -1.0 + i * h;
      s += unit_bump(w * w);
    }
    return s * h;
  }();
  return value;
}

// 2*pi * integral_0^1 exp(-1/(1-s^2)) s ds via composite Simpson.
double unit_bump_mass_2d() {
  static const double value = [] {
    const int n = 1 << 16;
    const double h = 1.0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * x * unit_bump(x * x);
    }
    return 2.0 * M_PI * s * h / 3.0;
  }();
  return value;
}

double table_interpolate(const std::vector<double>& z,
                         const std::vector<double>& v, double x) {
  if (x <= z.front() || x >= z.back()) return 0.0;
  auto it = std::upper_bound(z.begin(), z.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - z.begin());
  const double t = (x - z[i - 1]) / (z[i] - z[i - 1]);
  return v[i - 1] + t * (v[i] - v[i - 1]);
}

}  // namespace

KernelSpec KernelSpec::gaussian(double sigma, int dim) {
  if (!(sigma > 0)) throw InvalidArgument("gaussian kernel: sigma must be > 0");
  KernelSpec s;
  s.family = KernelFamily::gaussian;
  s.dim = dim;
  s.sigma = sigma;
  s.norm_const = std::pow(2.0 * M_PI * sigma * sigma, -0.5 * dim);
  return s;
}

KernelSpec KernelSpec::bump(double radius, int dim) {
  if (!(radius > 0)) throw InvalidArgument("bump kernel: radius must be > 0");
  KernelSpec s;
  s.family = KernelFamily::bump;
  s.dim = dim;
  s.radius = radius;
  const double unit = dim == 1 ? unit_bump_mass_1d() : unit_bump_mass_2d();
  s.norm_const = 1.0 / (unit * std::pow(radius, dim));
  return s;
}

KernelSpec KernelSpec::shifted_bump(double radius, double shift, int dim) {
  KernelSpec s = bump(radius, dim);
  s.family = KernelFamily::shifted_bump;
  s.shift = shift;
  return s;
}

KernelSpec KernelSpec::table(std::vector<double> z, std::vector<double> v) {
  if (z.size() != v.size() || z.size() < 2)
    throw InvalidArgument("table kernel: need matching sample columns");
  if (!std::is_sorted(z.begin(), z.end()))
    throw InvalidArgument("table kernel: sample abscissae must be ascending");
  for (double val : v)
    if (val < 0.0) throw InvalidArgument("table kernel: negative sample");
  KernelSpec s;
  s.family = KernelFamily::table;
  s.dim = 1;
  s.table_z = std::move(z);
  s.table_v = std::move(v);
  // Mass of the piecewise-linear interpolant.
  double m = 0.0;
  for (std::size_t i = 1; i < s.table_z.size(); ++i)
    m += 0.5 * (s.table_v[i] + s.table_v[i - 1]) *
         (s.table_z[i] - s.table_z[i - 1]);
  if (!(m > 0)) throw InvalidArgument("table kernel: zero mass");
  s.norm_const = 1.0 / m;
  return s;
}

KernelSpec KernelSpec::table_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("table kernel: cannot open " + path);
  std::vector<double> z, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) {
      z.push_back(a);
      v.push_back(b);
    }
  }
  return table(std::move(z), std::move(v));
}

KernelSpec KernelSpec::parse(const std::string& text, int dim) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  const std::string& name = parts[0];
  auto num = [&](std::size_t i) {
    if (i >= parts.size())
      throw ConfigError("kernel spec '" + text + "': missing parameter");
    return std::stod(parts[i]);
  };
  if (name == "gaussian") return gaussian(num(1), dim);
  if (name == "bump") return bump(num(1), dim);
  if (name == "shifted_bump") return shifted_bump(num(1), num(2), dim);
  if (name == "table") {
    if (parts.size() < 2)
      throw ConfigError("kernel spec '" + text + "': missing csv path");
    return table_from_csv(parts[1]);
  }
  throw ConfigError("unknown kernel family '" + name + "'");
}

double KernelSpec::evaluate(double x) const {
  switch (family) {
    case KernelFamily::gaussian:
      return norm_const * std::exp(-0.5 * x * x / (sigma * sigma));
    case KernelFamily::bump:
      return norm_const * unit_bump((x / radius) * (x / radius));
    case KernelFamily::shifted_bump: {
      const double z = (x - shift) / radius;
      return norm_const * unit_bump(z * z);
    }
    case KernelFamily::table:
      return norm_const * table_interpolate(table_z, table_v, x);
  }
  return 0.0;
}

double KernelSpec::evaluate(double x, double y) const {
  switch (family) {
    case KernelFamily::gaussian:
      return norm_const * std::exp(-0.5 * (x * x + y * y) / (sigma * sigma));
    case KernelFamily::bump:
      return norm_const * unit_bump((x * x + y * y) / (radius * radius));
    case KernelFamily::shifted_bump: {
      const double dx = x - shift;
      return norm_const * unit_bump((dx * dx + y * y) / (radius * radius));
    }
    case KernelFamily::table:
      throw InvalidArgument("table kernel: dim 1 only");
  }
  return 0.0;
}

double KernelSpec::effective_radius() const {
  switch (family) {
    case KernelFamily::gaussian:
      return 2.0 * sigma;
    case KernelFamily::bump:
    case KernelFamily::shifted_bump:
      return radius;
    case KernelFamily::table:
      return 0.5 * (table_z.back() - table_z.front());
  }
  return 0.0;
}

bool KernelSpec::compact_support() const {
  return family != KernelFamily::gaussian;
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  switch (family) {
    case KernelFamily::gaussian:
      out << "gaussian:" << sigma;
      break;
    case KernelFamily::bump:
      out << "bump:" << radius;
      break;
    case KernelFamily::shifted_bump:
      out << "shifted_bump:" << radius << ":" << shift;
      break;
    case KernelFamily::table:
      out << "table[" << table_z.size() << "]";
      break;
  }
  return out.str();
}

KernelSpec KernelSpec::prescaled(double lambda) const {
  KernelSpec s = *this;
  switch (family) {
    case KernelFamily::gaussian:
      s.sigma = sigma / lambda;
      s.norm_const = std::pow(2.0 * M_PI * s.sigma * s.sigma, -0.5 * dim);
      break;
    case KernelFamily::bump:
    case KernelFamily::shifted_bump:
      s.radius = radius / lambda;
      s.shift = shift / lambda;
      s.norm_const = norm_const * std::pow(lambda, dim);
      break;
    case KernelFamily::table: {
      s.table_z = table_z;
      for (double& z : s.table_z) z /= lambda;
      s.norm_const = norm_const * lambda;
      break;
    }
  }
  return s;
}

DiscreteKernel discretize(const KernelSpec& spec, const Grid& grid,
                          double lambda) {
  if (spec.dim != grid.dim)
    throw InvalidArgument("discretize: kernel/grid dimension mismatch");
  if (!(lambda >= 1.0))
    throw InvalidArgument("discretize: lambda must satisfy lambda >= 1");
  const double span = 2.0 * spec.effective_radius() / lambda;
  if (span < 4.0 * grid.spacing)
    throw UnderresolvedKernel("discretize: " + spec.describe() +
                              " at scale " + std::to_string(lambda) +
                              " spans fewer than 4 grid spacings");

  DiscreteKernel k;
  k.grid = grid;
  k.scale = lambda;
  k.source = spec;
  k.values.resize(grid.point_count());
  const double jac = grid.dim == 1 ? lambda : lambda * lambda;
  if (grid.dim == 1) {
    for (int i = 0; i < grid.n_per_axis; ++i)
      k.values[i] = jac * spec.evaluate(lambda * grid.coord(i));
  } else {
    for (int ix = 0; ix < grid.n_per_axis; ++ix)
      for (int iy = 0; iy < grid.n_per_axis; ++iy)
        k.values[static_cast<std::size_t>(ix) * grid.n_per_axis + iy] =
            jac * spec.evaluate(lambda * grid.coord(ix),
                                lambda * grid.coord(iy));
  }
  double s = 0.0;
  for (double v : k.values) s += v;
  s *= grid.cell_volume();
  if (!(s > 0.0))
    throw UnderresolvedKernel("discretize: kernel sampled to zero mass");
  for (double& v : k.values) v /= s;

  // Displacement-ordered copy (index m <-> offset m*h) and its DFT.
  const std::size_t n = static_cast<std::size_t>(grid.n_per_axis);
  fft::cvec disp(k.values.size());
  if (grid.dim == 1) {
    for (std::size_t m = 0; m < n; ++m)
      disp[m] = k.values[(m + n / 2) % n];
    fft::forward(disp);
  } else {
    for (std::size_t mx = 0; mx < n; ++mx)
      for (std::size_t my = 0; my < n; ++my)
        disp[mx * n + my] =
            k.values[((mx + n / 2) % n) * n + (my + n / 2) % n];
    fft::forward_2d(disp, n, n);
  }
  k.spectrum = std::move(disp);
  return k;
}

double second_moment_A(const DiscreteKernel& k) {
  if (k.scale != 1.0)
    throw InvalidArgument("second_moment_A: kernel must be at scale 1");
  SymmetryReport rep = check_symmetry(k);
  if (!rep.is_even)
    throw InvalidArgument("second_moment_A: kernel is not radially symmetric");
  const Grid& g = k.grid;
  double s = 0.0;
  if (g.dim == 1) {
    for (int i = 0; i < g.n_per_axis; ++i) {
      const double x = g.coord(i);
      s += k.values[i] * x * x;
    }
  } else {
    for (int ix = 0; ix < g.n_per_axis; ++ix) {
      const double x = g.coord(ix);
      for (int iy = 0; iy < g.n_per_axis; ++iy) {
        const double y = g.coord(iy);
        s += k.values[static_cast<std::size_t>(ix) * g.n_per_axis + iy] *
             (x * x + y * y);
      }
    }
  }
  return 0.5 * g.cell_volume() * s;
}

std::vector<double> first_moment_B(const DiscreteKernel& k) {
  const Grid& g = k.grid;
  std::vector<double> B(g.dim, 0.0);
  if (g.dim == 1) {
    for (int i = 0; i < g.n_per_axis; ++i) B[0] += k.values[i] * g.coord(i);
  } else {
    for (int ix = 0; ix < g.n_per_axis; ++ix)
      for (int iy = 0; iy < g.n_per_axis; ++iy) {
        const double v =
            k.values[static_cast<std::size_t>(ix) * g.n_per_axis + iy];
        B[0] += v * g.coord(ix);
        B[1] += v * g.coord(iy);
      }
  }
  for (double& b : B) b *= g.cell_volume();
  return B;
}

SymmetryReport check_symmetry(const DiscreteKernel& k) {
  const Grid& g = k.grid;
  SymmetryReport rep;
  double worst = 0.0;
  std::vector<double> B = first_moment_B(k);
  for (double b : B) worst = std::max(worst, std::abs(b));
  if (g.dim == 2) {
    double cross = 0.0;
    for (int ix = 0; ix < g.n_per_axis; ++ix)
      for (int iy = 0; iy < g.n_per_axis; ++iy)
        cross += k.values[static_cast<std::size_t>(ix) * g.n_per_axis + iy] *
                 g.coord(ix) * g.coord(iy);
    worst = std::max(worst, std::abs(cross * g.cell_volume()));
  }
  rep.odd_moment_max = worst;
  rep.is_even = worst < 1e-10;
  return rep;
}

Field convolve(const DiscreteKernel& k, const Field& f) {
  if (!(k.grid == f.grid)) throw GridMismatch("convolve: grid mismatch");
  const Grid& g = f.grid;
  const std::size_t n = static_cast<std::size_t>(g.n_per_axis);
  fft::cvec a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.values[i];
  const double w = g.cell_volume();
  if (g.dim == 1) {
    fft::forward(a);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= w * k.spectrum[i];
    fft::inverse(a);
  } else {
    fft::forward_2d(a, n, n);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= w * k.spectrum[i];
    fft::inverse_2d(a, n, n);
  }
  Field out = Field::zeros(g, f.time_tag);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a[i].real();
  return out;
}

Field convolve_direct(const DiscreteKernel& k, const Field& f) {
  if (!(k.grid == f.grid)) throw GridMismatch("convolve_direct: grid mismatch");
  const Grid& g = f.grid;
  const int n = g.n_per_axis;
  Field out = Field::zeros(g, f.time_tag);
  const double w = g.cell_volume();
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const int m = ((i - j) % n + n) % n;           // displacement index
        acc += k.values[(m + n / 2) % n] * f.at(j);    // kernel at (i-j)*h
      }
      out.at(i) = w * acc;
    }
  } else {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        double acc = 0.0;
        for (int jx = 0; jx < n; ++jx) {
          const int mx = ((ix - jx) % n + n) % n;
          const std::size_t krow =
              static_cast<std::size_t>((mx + n / 2) % n) * n;
          for (int jy = 0; jy < n; ++jy) {
            const int my = ((iy - jy) % n + n) % n;
            acc += k.values[krow + (my + n / 2) % n] * f.at(jx, jy);
          }
        }
        out.at(ix, iy) = w * acc;
      }
  }
  return out;
}

Field nonlocal_operator(const DiscreteKernel& k, const Field& f,
                        double lambda) {
  Field conv = convolve(k, f);
  const double l2 = lambda * lambda;
  for (std::size_t i = 0; i < conv.values.size(); ++i)
    conv.values[i] = l2 * (conv.values[i] - f.values[i]);
  return conv;
}

DiscreteKernel reflect(const DiscreteKernel& k) {
  DiscreteKernel out = k;
  const int n = k.grid.n_per_axis;
  auto flip = [&](int i) { return (n - i) % n; };  // x_i -> -x_i mod box
  if (k.grid.dim == 1) {
    for (int i = 0; i < n; ++i) out.values[flip(i)] = k.values[i];
  } else {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        out.values[static_cast<std::size_t>(flip(ix)) * n + flip(iy)] =
            k.values[static_cast<std::size_t>(ix) * n + iy];
  }
  const std::size_t un = static_cast<std::size_t>(n);
  fft::cvec disp(out.values.size());
  if (k.grid.dim == 1) {
    for (std::size_t m = 0; m < un; ++m)
      disp[m] = out.values[(m + un / 2) % un];
    fft::forward(disp);
  } else {
    for (std::size_t mx = 0; mx < un; ++mx)
      for (std::size_t my = 0; my < un; ++my)
        disp[mx * un + my] =
            out.values[((mx + un / 2) % un) * un + (my + un / 2) % un];
    fft::forward_2d(disp, un, un);
  }
  out.spectrum = std::move(disp);
  return out;
}

double spec_abs_moment(const KernelSpec& spec, double p) {
  // Fine trapezoid over a box that safely covers the support.
  const double R = spec.family == KernelFamily::gaussian
                       ? 12.0 * spec.sigma
                       : spec.effective_radius() + std::abs(spec.shift) + 1.0;
  const int n = 1 << 15;
  const double h = 2.0 * R / n;
  double s = 0.0;
  if (spec.dim == 1) {
    for (int i = 0; i < n; ++i) {
      const double z = -R + i * h;
      s += spec.evaluate(z) * std::pow(std::abs(z), p);
    }
    return s * h;
  }
  const int n2 = 1 << 11;
  const double h2 = 2.0 * R / n2;
  for (int ix = 0; ix < n2; ++ix) {
    const double x = -R + ix * h2;
    for (int iy = 0; iy < n2; ++iy) {
      const double y = -R + iy * h2;
      s += spec.evaluate(x, y) * std::pow(std::hypot(x, y), p);
    }
  }
  return s * h2 * h2;
}

}  // namespace nla
