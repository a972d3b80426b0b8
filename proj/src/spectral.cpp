#include "nla/spectral.hpp"

#include <cmath>
#include <complex>

#include "nla/errors.hpp"
#include "nla/fft.hpp"

namespace nla {

namespace {

fft::cvec to_spectrum(const Field& f) {
  fft::cvec a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.values[i];
  const std::size_t n = static_cast<std::size_t>(f.grid.n_per_axis);
  if (f.grid.dim == 1)
    fft::forward(a);
  else
    fft::forward_2d(a, n, n);
  return a;
}

Field to_field(fft::cvec a, const Grid& g, double t) {
  const std::size_t n = static_cast<std::size_t>(g.n_per_axis);
  if (g.dim == 1)
    fft::inverse(a);
  else
    fft::inverse_2d(a, n, n);
  Field out = Field::zeros(g, t);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a[i].real();
  return out;
}

}  // namespace

Field spectral_derivative(const Field& f, int axis) {
  const Grid& g = f.grid;
  if (axis < 0 || axis >= g.dim)
    throw InvalidArgument("spectral_derivative: bad axis");
  const std::size_t n = static_cast<std::size_t>(g.n_per_axis);
  fft::cvec a = to_spectrum(f);
  if (g.dim == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      double kap = box_frequency(g, static_cast<int>(k));
      if (2 * k == n) kap = 0.0;  // Nyquist mode of an odd operator
      a[k] *= std::complex<double>(0.0, kap);
    }
  } else {
    for (std::size_t kx = 0; kx < n; ++kx)
      for (std::size_t ky = 0; ky < n; ++ky) {
        const std::size_t k = axis == 0 ? kx : ky;
        double kap = box_frequency(g, static_cast<int>(k));
        if (2 * k == n) kap = 0.0;
        a[kx * n + ky] *= std::complex<double>(0.0, kap);
      }
  }
  return to_field(std::move(a), g, f.time_tag);
}

Field spectral_laplacian(const Field& f) {
  const Grid& g = f.grid;
  const std::size_t n = static_cast<std::size_t>(g.n_per_axis);
  fft::cvec a = to_spectrum(f);
  if (g.dim == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      const double kap = box_frequency(g, static_cast<int>(k));
      a[k] *= -kap * kap;
    }
  } else {
    for (std::size_t kx = 0; kx < n; ++kx) {
      const double kapx = box_frequency(g, static_cast<int>(kx));
      for (std::size_t ky = 0; ky < n; ++ky) {
        const double kapy = box_frequency(g, static_cast<int>(ky));
        a[kx * n + ky] *= -(kapx * kapx + kapy * kapy);
      }
    }
  }
  return to_field(std::move(a), g, f.time_tag);
}

double gradient_lp_integral(const Field& f, double p) {
  const Grid& g = f.grid;
  Field fx = spectral_derivative(f, 0);
  double s = 0.0;
  if (g.dim == 1) {
    for (double v : fx.values) s += std::pow(std::abs(v), p);
  } else {
    Field fy = spectral_derivative(f, 1);
    for (std::size_t i = 0; i < fx.values.size(); ++i)
      s += std::pow(std::hypot(fx.values[i], fy.values[i]), p);
  }
  return g.cell_volume() * s;
}

}  // namespace nla
