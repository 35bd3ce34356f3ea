#include <cmath>

#include "bclab/error.hpp"
#include "bclab/models.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

using Matrix = TwoStateMarkovModel::Matrix;
using Vector = TwoStateMarkovModel::Vector;

Matrix multiply(const Matrix& a, const Matrix& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Vector row_times(const Vector& v, const Matrix& m) {
  return {v[0] * m[0] + v[1] * m[2], v[0] * m[1] + v[1] * m[3]};
}

void require_distribution(double a, double b, const char* what) {
  for (double x : {a, b}) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw Error(ErrorCode::ValueError, std::string(what) + " has an entry outside [0, 1]");
    }
  }
  if (std::abs(a + b - 1.0) > 1e-12) {
    throw Error(ErrorCode::ValueError, std::string(what) + " does not sum to 1");
  }
}

}  // namespace

TwoStateMarkovModel::TwoStateMarkovModel(Vector initial, Matrix transition)
    : initial_(initial), transition_(transition) {
  require_distribution(initial_[0], initial_[1], "initial distribution");
  require_distribution(transition_[0], transition_[1], "transition row 0");
  require_distribution(transition_[2], transition_[3], "transition row 1");
  const Matrix taboo{transition_[0], 0.0, transition_[2], 0.0};
  transition_powers_[0] = transition_;
  taboo_powers_[0] = taboo;
  for (int k = 1; k < kPowers; ++k) {
    transition_powers_[k] = multiply(transition_powers_[k - 1], transition_powers_[k - 1]);
    taboo_powers_[k] = multiply(taboo_powers_[k - 1], taboo_powers_[k - 1]);
  }
}

TwoStateMarkovModel::Vector TwoStateMarkovModel::apply(
    Vector v, const std::array<Matrix, kPowers>& powers, Index steps) const {
  for (int k = 0; steps != 0; ++k, steps >>= 1) {
    if (steps & 1U) v = row_times(v, powers[k]);
  }
  return v;
}

TwoStateMarkovModel::Matrix TwoStateMarkovModel::transition_power(Index steps) const {
  Matrix m{1.0, 0.0, 0.0, 1.0};
  for (int k = 0; steps != 0; ++k, steps >>= 1) {
    if (steps & 1U) m = multiply(m, transition_powers_[k]);
  }
  return m;
}

TwoStateMarkovModel::Vector TwoStateMarkovModel::state_distribution(Index n) const {
  if (n == 0) throw Error(ErrorCode::IndexOutOfRange, "time starts at 1");
  return apply(initial_, transition_powers_, n - 1);
}

double TwoStateMarkovModel::do_marginal(Index n) const { return state_distribution(n)[1]; }

double TwoStateMarkovModel::do_pair(Index i, Index j) const {
  return do_marginal(i) * transition_power(j - i)[3];
}

// Taboo propagation: carry the sub-probability vector of "no visit to state 1
// inside the ranges so far", zeroing state 1 at every restricted time.
double TwoStateMarkovModel::do_avoid(std::span<const IndexRange> ranges) const {
  Vector v = initial_;
  Index t = 1;
  for (const auto& r : ranges) {
    const Index first = r.lo + 1;
    v = apply(v, transition_powers_, first - t);
    v[1] = 0.0;
    v = apply(v, taboo_powers_, r.hi - first);
    t = r.hi;
  }
  return v[0] + v[1];
}

double TwoStateMarkovModel::do_tail_union_upper(Index tail_start) const {
  return *do_tail_union_exact(tail_start);
}

std::optional<double> TwoStateMarkovModel::do_tail_union_exact(Index tail_start) const {
  // If state 1 is reachable from 0 the chain hits 1 infinitely often (or is
  // absorbed there). Otherwise 0 is absorbing and the tail union is {X_N = 1}.
  if (transition_[1] > 0.0) return 1.0;
  return do_marginal(tail_start);
}

std::optional<double> TwoStateMarkovModel::do_marginal_tail_sum(Index tail_start) const {
  if (transition_[1] > 0.0) return std::nullopt;
  const double p = do_marginal(tail_start);
  if (p == 0.0) return 0.0;
  if (transition_[3] >= 1.0) return std::nullopt;
  return p / (1.0 - transition_[3]);
}

std::vector<std::uint8_t> TwoStateMarkovModel::do_sample_prefix(std::uint64_t seed, Index n) const {
  CounterRng rng(seed);
  std::vector<std::uint8_t> path(n);
  int state = rng.bernoulli(initial_[1]) ? 1 : 0;
  path[0] = static_cast<std::uint8_t>(state);
  for (Index k = 1; k < n; ++k) {
    state = rng.bernoulli(transition_[state * 2 + 1]) ? 1 : 0;
    path[k] = static_cast<std::uint8_t>(state);
  }
  return path;
}

}  // namespace bclab
