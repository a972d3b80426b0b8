#pragma once

#include "nla/grid.hpp"

namespace nla {

/// Spectral partial derivative along one axis (0 = x, 1 = y).
Field spectral_derivative(const Field& f, int axis = 0);

/// Spectral Laplacian.
Field spectral_laplacian(const Field& f);

/// Rectangle-rule integral of |grad f|^p with the gradient computed
/// spectrally.
double gradient_lp_integral(const Field& f, double p);

}  // namespace nla
