#pragma once

#include <stdexcept>
#include <string>

namespace nla {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument to an operation (bad p, bad lambda, grid mismatch, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// Two fields/kernels live on different grids.
struct GridMismatch : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

/// Kernel effective support narrower than 4 grid spacings per axis.
struct UnderresolvedKernel : Error {
  using Error::Error;
};

/// A time step grew the sup norm beyond the explicit-scheme bound.
struct StabilityViolation : Error {
  using Error::Error;
};

/// Mass reached the boundary region of the truncated box.
struct DomainOverflow : Error {
  using Error::Error;
};

/// Not enough samples inside a fit window.
struct InsufficientSamples : Error {
  using Error::Error;
};

/// Config file problem; message names the offending key.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace nla
