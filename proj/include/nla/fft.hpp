#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nla::fft {

using cvec = std::vector<std::complex<double>>;

/// In-place radix-2 transform. sign = -1 forward, +1 backward (unnormalized).
/// n must be a power of two.
void transform(std::complex<double>* data, std::size_t n, int sign);

/// Forward DFT, f_hat[k] = sum_j f[j] exp(-2*pi*i*j*k/n).
void forward(cvec& a);

/// Inverse of forward (includes the 1/n factor).
void inverse(cvec& a);

/// Forward/inverse DFT on row-major data of shape [rows][cols],
/// transforming every axis (rows == 1 gives the 1-d transform).
void forward_2d(cvec& a, std::size_t rows, std::size_t cols);
void inverse_2d(cvec& a, std::size_t rows, std::size_t cols);

}  // namespace nla::fft
