#pragma once

#include <string>
#include <vector>

#include "nla/grid.hpp"

namespace nla {

enum class ProfileKind { heat, burgers_source, reference_numeric };

/// Asymptotic profile description: U(t,x) = t^(-d/2) f_m(x/sqrt(t)).
/// alpha = 1 in the critical case q = 1 + 1/d, else 0.
struct ProfileSpec {
  double m = 1.0;
  double A = 0.5;
  std::vector<double> B = {0.0};
  double q = 2.0;
  int alpha = 0;
  ProfileKind kind = ProfileKind::heat;

  ProfileSpec() = default;
  ProfileSpec(double m, double A, std::vector<double> B, double q,
              ProfileKind kind);

  int dim() const { return static_cast<int>(B.size()); }
};

/// U(t,x) = m (4 pi A t)^(-d/2) exp(-|x|^2/(4At)); requires kind = heat, t > 0.
Field heat_profile(const ProfileSpec& spec, double t, const Grid& grid);

/// Self-similar source solution of U_t = A U_xx - B (|U| U)_x with mass m
/// (d = 1, q = 2). kind = burgers_source evaluates the closed form obtained
/// from the Cole-Hopf transformation; kind = reference_numeric integrates the
/// local equation from a narrow Gaussian (variance 4*A*t0) instead.
Field burgers_source_profile(const ProfileSpec& spec, double t,
                             const Grid& grid, double t0 = 1e-3);

/// Residual of the profile equation in its A-consistent form:
///   R = A Lap f + x.grad f / 2 + (d/2) f - alpha B.grad(|f|^(q-1) f),
/// evaluated with spectral derivatives (x.grad f in physical space).
Field profile_residual(const Field& f, const ProfileSpec& spec);

/// JSON sidecar with the profile metadata (m, A, B, q, alpha, kind).
void write_profile_sidecar(const ProfileSpec& spec, const std::string& path);

}  // namespace nla
