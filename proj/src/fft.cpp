#include "nla/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace nla::fft {

namespace {

struct Tables {
  std::vector<std::size_t> bitrev;  // permutation for size n
  cvec twiddle;                     // exp(-2*pi*i*j/n), j < n/2
};

const Tables& tables_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Tables> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Tables t;
  t.bitrev.resize(n);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
    t.bitrev[i] = r;
  }
  t.twiddle.resize(n / 2);
  const double base = -2.0 * M_PI / static_cast<double>(n);
  for (std::size_t j = 0; j < n / 2; ++j)
    t.twiddle[j] = {std::cos(base * static_cast<double>(j)),
                    std::sin(base * static_cast<double>(j))};
  return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace

void transform(std::complex<double>* data, std::size_t n, int sign) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft: length must be a power of two");
  if (n == 1) return;

  const Tables& t = tables_for(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = t.bitrev[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = t.twiddle[k * stride];
        if (sign > 0) w = std::conj(w);
        const std::complex<double> odd = data[start + k + half] * w;
        const std::complex<double> even = data[start + k];
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

void forward(cvec& a) { transform(a.data(), a.size(), -1); }

void inverse(cvec& a) {
  transform(a.data(), a.size(), +1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
}

namespace {

void transform_2d(cvec& a, std::size_t rows, std::size_t cols, int sign) {
  if (a.size() != rows * cols)
    throw std::invalid_argument("fft: shape mismatch");
  for (std::size_t r = 0; r < rows; ++r)
    transform(a.data() + r * cols, cols, sign);
  if (rows > 1) {
    cvec col(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) col[r] = a[r * cols + c];
      transform(col.data(), rows, sign);
      for (std::size_t r = 0; r < rows; ++r) a[r * cols + c] = col[r];
    }
  }
}

}  // namespace

void forward_2d(cvec& a, std::size_t rows, std::size_t cols) {
  transform_2d(a, rows, cols, -1);
}

void inverse_2d(cvec& a, std::size_t rows, std::size_t cols) {
  transform_2d(a, rows, cols, +1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
}

}  // namespace nla::fft
