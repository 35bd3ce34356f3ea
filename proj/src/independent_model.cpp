#include <algorithm>
#include <cmath>
#include <variant>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"
#include "bclab/models.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

constexpr std::size_t kChunk = 256;

bool overlaps(std::span<const IndexRange> a, std::span<const IndexRange> b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].hi <= b[j].lo) {
      ++i;
    } else if (b[j].hi <= a[i].lo) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace

IndependentModel::IndependentModel(MarginalSpec spec) : spec_(std::move(spec)) { validate(spec_); }

double IndependentModel::do_marginal(Index n) const { return marginal_value(spec_, n); }

double IndependentModel::do_pair(Index i, Index j) const {
  return marginal_value(spec_, i) * marginal_value(spec_, j);
}

// Products over long ranges are taken chunk by chunk with the SIMD kernel;
// chunk products are combined through a compensated log-sum so that ranges of
// millions of indices keep close to full relative precision.
double IndependentModel::range_avoid_exact(IndexRange r) const {
  if (const auto* c = std::get_if<ConstantMarginal>(&spec_)) {
    return std::pow(1.0 - c->c, static_cast<double>(r.size()));
  }
  Index n = r.lo + 1;
  if (const auto* e = std::get_if<ExplicitMarginal>(&spec_)) {
    double prod = 1.0;
    for (; n <= r.hi && n <= e->values.size(); ++n) prod *= (1.0 - e->values[n - 1]);
    if (n <= r.hi) prod *= std::pow(1.0 - e->tail, static_cast<double>(r.hi - n + 1));
    return prod;
  }
  std::array<double, kChunk> buf{};
  kernels::CompensatedSum log_sum;
  double short_product = 1.0;
  bool used_log = false;
  while (n <= r.hi) {
    const std::size_t len = static_cast<std::size_t>(std::min<Index>(kChunk, r.hi - n + 1));
    for (std::size_t k = 0; k < len; ++k) buf[k] = marginal_value(spec_, n + k);
    const double chunk = kernels::complement_product(std::span(buf.data(), len));
    if (chunk == 0.0) return 0.0;
    if (!used_log && n + len > r.hi) {
      short_product = chunk;
    } else {
      used_log = true;
      log_sum.add(std::log(chunk));
    }
    n += len;
  }
  return used_log ? std::exp(log_sum.value()) : short_product;
}

double IndependentModel::do_avoid(std::span<const IndexRange> ranges) const {
  double prod = 1.0;
  for (const auto& r : ranges) prod *= range_avoid_exact(r);
  return prod;
}

double IndependentModel::do_joint_union(std::span<const IndexRange> first,
                                        std::span<const IndexRange> second) const {
  if (!overlaps(first, second)) {
    // Unions over disjoint index sets are independent.
    return (1.0 - do_avoid(first)) * (1.0 - do_avoid(second));
  }
  return EventSequenceModel::do_joint_union(first, second);
}

double IndependentModel::do_tail_union_upper(Index tail_start) const {
  const auto sum = marginal_tail_sum_upper(spec_, tail_start);
  return sum ? std::min(1.0, *sum) : 1.0;
}

std::optional<double> IndependentModel::do_tail_union_exact(Index tail_start) const {
  // A divergent tail sum forces infinitely many occurrences.
  if (!marginal_tail_sum_upper(spec_, tail_start)) return 1.0;
  if (const auto* e = std::get_if<ExplicitMarginal>(&spec_)) {
    if (tail_start > e->values.size()) return 0.0;
    return 1.0 - range_avoid_exact({tail_start - 1, e->values.size()});
  }
  if (const auto* c = std::get_if<ConstantMarginal>(&spec_); c && c->c == 0.0) return 0.0;
  return std::nullopt;
}

std::optional<double> IndependentModel::do_marginal_tail_sum(Index tail_start) const {
  return marginal_tail_sum_upper(spec_, tail_start);
}

std::vector<std::uint8_t> IndependentModel::do_sample_prefix(std::uint64_t seed, Index n) const {
  CounterRng rng(seed);
  std::vector<std::uint8_t> path(n);
  for (Index k = 1; k <= n; ++k) path[k - 1] = rng.bernoulli(marginal_value(spec_, k)) ? 1 : 0;
  return path;
}

}  // namespace bclab
