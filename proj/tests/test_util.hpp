#pragma once

#include <cmath>
#include <limits>
#include <random>

#include "nla/grid.hpp"

namespace nla::test {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Mass-m gaussian density with the given variance, centered at c.
inline Field gaussian_field(const Grid& g, double m, double variance,
                            double center = 0.0) {
  const double amp = m / std::sqrt(2.0 * M_PI * variance);
  if (g.dim == 1)
    return Field::from_function(g, [=](double x) {
      const double z = x - center;
      return amp * std::exp(-0.5 * z * z / variance);
    });
  const double amp2 = m / (2.0 * M_PI * variance);
  return Field::from_function(g, [=](double x, double y) {
    const double zx = x - center;
    return amp2 * std::exp(-0.5 * (zx * zx + y * y) / variance);
  });
}

/// Deterministic rough-but-smooth test field: a short random Fourier sum.
inline Field seeded_field(const Grid& g, unsigned seed, int modes = 7) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<double> a, b;
  for (int k = 0; k < modes; ++k) {
    a.push_back(amp(rng));
    b.push_back(amp(rng));
  }
  const double L = g.half_width;
  if (g.dim == 1)
    return Field::from_function(g, [=](double x) {
      double s = 0.0;
      for (int k = 0; k < modes; ++k)
        s += a[k] * std::cos((k + 1) * M_PI * x / L) +
             b[k] * std::sin((k + 1) * M_PI * x / L);
      return s;
    });
  return Field::from_function(g, [=](double x, double y) {
    double s = 0.0;
    for (int k = 0; k < modes; ++k)
      s += a[k] * std::cos((k + 1) * M_PI * x / L) *
           std::cos((k + 1) * M_PI * y / L) +
           b[k] * std::sin((k + 1) * M_PI * x / L) *
               std::sin((k + 1) * M_PI * y / L);
    return s;
  });
}

}  // namespace nla::test
