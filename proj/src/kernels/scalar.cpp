#include "bclab/kernels.hpp"

namespace bclab::kernels::scalar {

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double complement_product(std::span<const double> p) {
  double prod = 1.0;
  for (double v : p) prod *= (1.0 - v);
  return prod;
}

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = dot(a.subspan(i * cols, cols), x.first(cols));
  }
}

void matvec_transposed(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<double> y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double xi = x[i];
    const double* row = a.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) y[j] += xi * row[j];
  }
}

bool any_set(std::span<const std::uint8_t> flags) {
  for (auto f : flags) {
    if (f != 0) return true;
  }
  return false;
}

std::size_t count_set(std::span<const std::uint8_t> flags) {
  std::size_t n = 0;
  for (auto f : flags) n += (f != 0);
  return n;
}

}  // namespace bclab::kernels::scalar
