#include "bclab/operator_norm.hpp"

#include <algorithm>
#include <cmath>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

double norm2(const std::vector<double>& v) { return std::sqrt(kernels::dot(v, v)); }

struct PowerRun {
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration for the Gram matrix from a given unit start vector.
PowerRun gram_power_iteration(const DenseMatrix& a, std::vector<double> v, std::size_t max_iters,
                              double tol) {
  const std::size_t n = a.rows;
  std::vector<double> av(n);
  std::vector<double> gv(n);
  PowerRun run;
  double previous = -1.0;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    kernels::matvec(a.data, n, n, v, av);
    kernels::matvec_transposed(a.data, n, n, av, gv);
    const double lambda = kernels::dot(v, gv);
    const double len = norm2(gv);
    run.iterations = it;
    run.lambda = std::max(lambda, 0.0);
    if (len == 0.0) {
      run.converged = true;
      return run;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = gv[i] / len;
    if (previous >= 0.0 && std::abs(lambda - previous) <= tol * std::max(lambda, 1e-300)) {
      run.converged = true;
      return run;
    }
    previous = lambda;
  }
  return run;
}

}  // namespace

NormEstimate operator_norm_estimate(const DenseMatrix& matrix, std::size_t max_iters, double tol) {
  if (matrix.rows != matrix.cols || matrix.data.size() != matrix.rows * matrix.cols) {
    throw Error(ErrorCode::NonSquare, "operator norm needs a square matrix");
  }
  if (std::any_of(matrix.data.begin(), matrix.data.end(), [](double x) { return !std::isfinite(x); })) {
    throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  }
  if (max_iters == 0) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  const std::size_t n = matrix.rows;
  if (n == 0) return {0.0, 0, true};

  std::vector<double> start(n, 1.0 / std::sqrt(static_cast<double>(n)));
  PowerRun best = gram_power_iteration(matrix, start, max_iters, tol);

  CounterRng rng(0x5EEDULL);
  std::vector<double> perturbed(n);
  for (std::size_t i = 0; i < n; ++i) perturbed[i] = 1.0 + (rng.uniform() - 0.5);
  const double len = norm2(perturbed);
  for (double& x : perturbed) x /= len;
  PowerRun second = gram_power_iteration(matrix, perturbed, max_iters, tol);

  NormEstimate out;
  out.iterations = best.iterations + second.iterations;
  if (second.lambda > best.lambda) best = second;
  out.value = std::sqrt(best.lambda);
  out.converged = best.converged;
  return out;
}

}  // namespace bclab
