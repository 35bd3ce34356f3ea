#pragma once

#include <cstddef>
#include <vector>

namespace bclab {

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct NormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest singular value of a square matrix by power iteration on A^T A.
///
/// Starts from the normalized all-ones vector; once that run settles (or
/// collapses to zero) it is repeated from a fixed pseudo-random perturbation
/// of the start and the larger Rayleigh quotient wins. A start vector
/// orthogonal to the dominant direction therefore cannot hide it.
/// Throws NonSquare or NonFinite.
NormEstimate operator_norm_estimate(const DenseMatrix& matrix, std::size_t max_iters = 10000,
                                    double tol = 1e-13);

}  // namespace bclab
