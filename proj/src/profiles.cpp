#include "nla/profiles.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "nla/errors.hpp"
#include "nla/solver.hpp"
#include "nla/spectral.hpp"

namespace nla {

ProfileSpec::ProfileSpec(double m_, double A_, std::vector<double> B_,
                         double q_, ProfileKind kind_)
    : m(m_), A(A_), B(std::move(B_)), q(q_), kind(kind_) {
  if (!(A > 0)) throw InvalidArgument("ProfileSpec: A must be > 0");
  if (B.empty() || B.size() > 2)
    throw InvalidArgument("ProfileSpec: B must have 1 or 2 components");
  const double critical = 1.0 + 1.0 / static_cast<double>(B.size());
  alpha = std::abs(q - critical) <= 1e-12 ? 1 : 0;
}

Field heat_profile(const ProfileSpec& spec, double t, const Grid& grid) {
  if (spec.kind != ProfileKind::heat)
    throw InvalidArgument("heat_profile: spec.kind must be heat");
  if (!(t > 0)) throw InvalidArgument("heat_profile: t must be positive");
  if (grid.dim != spec.dim())
    throw InvalidArgument("heat_profile: dimension mismatch");
  const double denom = 4.0 * spec.A * t;
  const double amp = spec.m * std::pow(4.0 * M_PI * spec.A * t,
                                       -0.5 * grid.dim);
  if (grid.dim == 1)
    return Field::from_function(
        grid, [&](double x) { return amp * std::exp(-x * x / denom); }, t);
  return Field::from_function(
      grid,
      [&](double x, double y) {
        return amp * std::exp(-(x * x + y * y) / denom);
      },
      t);
}

namespace {

// Closed form from the Cole-Hopf transformation: with w = 2BU the equation
// becomes w_t + w w_x = A w_xx with initial mass 2Bm, whose single-hump
// solution is
//   w(x,t) = sqrt(A/t) s e^{-xi^2/4} / (sqrt(pi) + s (sqrt(pi)/2) erfc(xi/2)),
// xi = x/sqrt(At), s = e^R - 1, R = mB/A.
double burgers_closed_form(double x, double t, double m, double A, double B) {
  const double R = m * B / A;
  const double s = std::expm1(R);
  const double xi = x / std::sqrt(A * t);
  const double num = s * std::exp(-0.25 * xi * xi);
  const double den =
      std::sqrt(M_PI) + s * 0.5 * std::sqrt(M_PI) * std::erfc(0.5 * xi);
  return std::sqrt(A / t) * num / den / (2.0 * B);
}

}  // namespace

Field burgers_source_profile(const ProfileSpec& spec, double t,
                             const Grid& grid, double t0) {
  if (grid.dim != 1 || spec.dim() != 1)
    throw InvalidArgument("burgers_source_profile: d = 1 only");
  if (std::abs(spec.q - 2.0) > 1e-12)
    throw InvalidArgument("burgers_source_profile: q = 2 only");
  if (!(t > 0)) throw InvalidArgument("burgers_source_profile: t must be > 0");
  if (spec.kind == ProfileKind::heat)
    throw InvalidArgument("burgers_source_profile: wrong profile kind");

  const double B = spec.B[0];
  if (std::abs(B) < 1e-14) {
    // Zero convection reduces to the heat kernel.
    ProfileSpec heat = spec;
    heat.kind = ProfileKind::heat;
    Field out = heat_profile(heat, t, grid);
    return out;
  }

  if (spec.kind == ProfileKind::burgers_source) {
    return Field::from_function(
        grid,
        [&](double x) { return burgers_closed_form(x, t, spec.m, spec.A, B); },
        t);
  }

  // reference_numeric: a narrow Gaussian of variance 4*A*t0 carries the
  // delta-approximation; it matches the heat flow at internal time 2*t0.
  const double var0 = 4.0 * spec.A * t0;
  const double amp = spec.m / std::sqrt(2.0 * M_PI * var0);
  Field u0 = Field::from_function(
      grid,
      [&](double x) { return amp * std::exp(-0.5 * x * x / var0); },
      2.0 * t0);
  StepperConfig cfg;
  cfg.scheme = Scheme::rk4;
  cfg.t_end = t;
  cfg.tail_tol = 1.0;  // profile construction, no box monitor
  auto [rec, out] = solve_local_reference(u0, spec.A, spec.B, spec.q, cfg);
  return out;
}

Field profile_residual(const Field& f, const ProfileSpec& spec) {
  const Grid& g = f.grid;
  if (g.dim != spec.dim())
    throw InvalidArgument("profile_residual: dimension mismatch");

  Field lap = spectral_laplacian(f);
  Field out = Field::zeros(g, f.time_tag);
  const double half_d = 0.5 * g.dim;

  // A*Lap f + x.grad f / 2 + (d/2) f
  Field fx = spectral_derivative(f, 0);
  if (g.dim == 1) {
    for (int i = 0; i < g.n_per_axis; ++i)
      out.at(i) = spec.A * lap.at(i) + 0.5 * g.coord(i) * fx.at(i) +
                  half_d * f.at(i);
  } else {
    Field fy = spectral_derivative(f, 1);
    for (int ix = 0; ix < g.n_per_axis; ++ix)
      for (int iy = 0; iy < g.n_per_axis; ++iy)
        out.at(ix, iy) = spec.A * lap.at(ix, iy) +
                         0.5 * (g.coord(ix) * fx.at(ix, iy) +
                                g.coord(iy) * fy.at(ix, iy)) +
                         half_d * f.at(ix, iy);
  }

  if (spec.alpha == 1) {
    Field nl = Field::zeros(g, f.time_tag);
    for (std::size_t i = 0; i < nl.values.size(); ++i) {
      const double v = f.values[i];
      nl.values[i] = v == 0.0 ? 0.0
                              : std::pow(std::abs(v), spec.q - 1.0) * v;
    }
    Field nx = spectral_derivative(nl, 0);
    if (g.dim == 1) {
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] -= spec.B[0] * nx.values[i];
    } else {
      Field ny = spectral_derivative(nl, 1);
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] -= spec.B[0] * nx.values[i] + spec.B[1] * ny.values[i];
    }
  }
  return out;
}

void write_profile_sidecar(const ProfileSpec& spec, const std::string& path) {
  nlohmann::json j;
  j["m"] = spec.m;
  j["A"] = spec.A;
  j["B"] = spec.B;
  j["q"] = spec.q;
  j["alpha"] = spec.alpha;
  switch (spec.kind) {
    case ProfileKind::heat: j["kind"] = "heat"; break;
    case ProfileKind::burgers_source: j["kind"] = "burgers_source"; break;
    case ProfileKind::reference_numeric: j["kind"] = "reference_numeric"; break;
  }
  std::ofstream out(path);
  if (!out) throw Error("write_profile_sidecar: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace nla
