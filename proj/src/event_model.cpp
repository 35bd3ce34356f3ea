#include "bclab/event_model.hpp"

#include <algorithm>
#include <string>

#include "bclab/error.hpp"

namespace bclab {

std::vector<IndexRange> normalize_ranges(std::span<const IndexRange> ranges) {
  std::vector<IndexRange> sorted;
  sorted.reserve(ranges.size());
  for (const auto& r : ranges) {
    if (!r.empty()) sorted.push_back(r);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const IndexRange& x, const IndexRange& y) { return x.lo < y.lo; });
  std::vector<IndexRange> merged;
  for (const auto& r : sorted) {
    if (!merged.empty() && r.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, r.hi);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

void EventSequenceModel::check_index(Index n) const {
  if (n == 0) throw Error(ErrorCode::IndexOutOfRange, "event indices start at 1");
  if (auto len = length(); len && n > *len) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(n) + " exceeds sequence length " + std::to_string(*len));
  }
}

std::vector<IndexRange> EventSequenceModel::checked_ranges(
    std::span<const IndexRange> ranges) const {
  for (const auto& r : ranges) {
    if (r.lo >= r.hi) {
      throw Error(ErrorCode::EmptyRange, "range (" + std::to_string(r.lo) + ", " +
                                             std::to_string(r.hi) + "] is empty");
    }
    check_index(r.hi);
  }
  return normalize_ranges(ranges);
}

double EventSequenceModel::marginal(Index n) const {
  check_index(n);
  return do_marginal(n);
}

double EventSequenceModel::pair(Index i, Index j) const {
  check_index(i);
  check_index(j);
  if (i == j) return do_marginal(i);
  return i < j ? do_pair(i, j) : do_pair(j, i);
}

double EventSequenceModel::range_union(Index a, Index b) const {
  const IndexRange r{a, b};
  return union_probability(std::span(&r, 1));
}

double EventSequenceModel::range_avoid(Index a, Index b) const {
  const IndexRange r{a, b};
  return avoid_probability(std::span(&r, 1));
}

double EventSequenceModel::avoid_probability(std::span<const IndexRange> ranges) const {
  const auto normalized = checked_ranges(ranges);
  if (normalized.empty()) return 1.0;
  return std::clamp(do_avoid(normalized), 0.0, 1.0);
}

double EventSequenceModel::union_probability(std::span<const IndexRange> ranges) const {
  return 1.0 - avoid_probability(ranges);
}

double EventSequenceModel::joint_union_probability(std::span<const IndexRange> first,
                                                   std::span<const IndexRange> second) const {
  const auto a = checked_ranges(first);
  const auto b = checked_ranges(second);
  if (a.empty() || b.empty()) return 0.0;
  const double p = do_joint_union(a, b);
  const double cap = std::min(1.0 - do_avoid(a), 1.0 - do_avoid(b));
  return std::clamp(p, 0.0, cap);
}

double EventSequenceModel::tail_union_upper(Index tail_start) const {
  if (tail_start == 0) throw Error(ErrorCode::IndexOutOfRange, "tail start must be >= 1");
  if (auto len = length(); len && tail_start > *len) return 0.0;
  return std::clamp(do_tail_union_upper(tail_start), 0.0, 1.0);
}

std::optional<double> EventSequenceModel::tail_union_exact(Index tail_start) const {
  if (tail_start == 0) throw Error(ErrorCode::IndexOutOfRange, "tail start must be >= 1");
  if (auto len = length(); len && tail_start > *len) return 0.0;
  return do_tail_union_exact(tail_start);
}

std::optional<double> EventSequenceModel::marginal_tail_sum(Index tail_start) const {
  if (tail_start == 0) throw Error(ErrorCode::IndexOutOfRange, "tail start must be >= 1");
  if (auto len = length(); len && tail_start > *len) return 0.0;
  return do_marginal_tail_sum(tail_start);
}

std::vector<std::uint8_t> EventSequenceModel::sample_prefix(std::uint64_t seed, Index n) const {
  if (n == 0) return {};
  check_index(n);
  return do_sample_prefix(seed, n);
}

double EventSequenceModel::do_pair(Index i, Index j) const {
  const IndexRange a{i - 1, i};
  const IndexRange b{j - 1, j};
  return do_joint_union(std::span(&a, 1), std::span(&b, 1));
}

double EventSequenceModel::do_joint_union(std::span<const IndexRange> first,
                                          std::span<const IndexRange> second) const {
  std::vector<IndexRange> both(first.begin(), first.end());
  both.insert(both.end(), second.begin(), second.end());
  const auto merged = normalize_ranges(both);
  const double avoid_a = do_avoid(first);
  const double avoid_b = do_avoid(second);
  const double avoid_ab = do_avoid(merged);
  // P(U_a and U_b) = 1 - P(not U_a) - P(not U_b) + P(neither)
  return ((1.0 - avoid_a) - avoid_b) + avoid_ab;
}

}  // namespace bclab
