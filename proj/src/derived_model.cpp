#include "bclab/error.hpp"
#include "bclab/kernels.hpp"
#include "bclab/models.hpp"

namespace bclab {

DerivedModel::DerivedModel(ModelPtr base, std::vector<IndexRange> ranges, std::string family_name)
    : base_(std::move(base)), ranges_(std::move(ranges)), family_(std::move(family_name)) {
  if (!base_) throw Error(ErrorCode::InvalidArgument, "derived model needs a base model");
  if (ranges_.empty()) throw Error(ErrorCode::InvalidArgument, "derived model needs at least one event");
  Index previous_hi = 0;
  for (const auto& r : ranges_) {
    if (r.empty()) throw Error(ErrorCode::EmptyRange, "derived event over an empty base range");
    if (r.lo < previous_hi) throw Error(ErrorCode::InvalidArgument, "base ranges must be increasing and disjoint");
    previous_hi = r.hi;
  }
  if (auto len = base_->length(); len && previous_hi > *len) {
    throw Error(ErrorCode::IndexOutOfRange, "plan reaches past the end of the base sequence");
  }
}

std::vector<IndexRange> DerivedModel::map_to_base(std::span<const IndexRange> ranges) const {
  std::vector<IndexRange> out;
  for (const auto& r : ranges) {
    for (Index k = r.lo + 1; k <= r.hi; ++k) {
      const auto& br = ranges_[k - 1];
      if (!out.empty() && out.back().hi == br.lo) {
        out.back().hi = br.hi;
      } else {
        out.push_back(br);
      }
    }
  }
  return normalize_ranges(out);
}

double DerivedModel::do_marginal(Index n) const {
  const auto& r = ranges_[n - 1];
  return base_->range_union(r.lo, r.hi);
}

double DerivedModel::do_pair(Index i, Index j) const {
  const auto& a = ranges_[i - 1];
  const auto& b = ranges_[j - 1];
  if (a.size() == 1 && b.size() == 1) return base_->pair(a.hi, b.hi);
  return base_->joint_union_probability(std::span(&a, 1), std::span(&b, 1));
}

double DerivedModel::do_avoid(std::span<const IndexRange> ranges) const {
  return base_->avoid_probability(map_to_base(ranges));
}

double DerivedModel::do_joint_union(std::span<const IndexRange> first,
                                    std::span<const IndexRange> second) const {
  return base_->joint_union_probability(map_to_base(first), map_to_base(second));
}

std::optional<double> DerivedModel::do_tail_union_exact(Index tail_start) const {
  const IndexRange rest{tail_start - 1, ranges_.size()};
  return 1.0 - do_avoid(std::span(&rest, 1));
}

double DerivedModel::do_tail_union_upper(Index tail_start) const {
  // The sequence is finite, so the tail union is an exact finite union.
  return *do_tail_union_exact(tail_start);
}

std::optional<double> DerivedModel::do_marginal_tail_sum(Index tail_start) const {
  kernels::CompensatedSum sum;
  for (Index k = tail_start; k <= ranges_.size(); ++k) sum.add(do_marginal(k));
  return sum.value();
}

std::vector<std::uint8_t> DerivedModel::do_sample_prefix(std::uint64_t seed, Index n) const {
  const auto base_path = base_->sample_prefix(seed, ranges_[n - 1].hi);
  std::vector<std::uint8_t> path(n);
  for (Index k = 0; k < n; ++k) {
    const auto& r = ranges_[k];
    path[k] = kernels::any_set(std::span(base_path).subspan(r.lo, r.size())) ? 1 : 0;
  }
  return path;
}

std::shared_ptr<const DerivedModel> subsequence_model(ModelPtr base, const std::vector<Index>& indices) {
  std::vector<IndexRange> ranges;
  ranges.reserve(indices.size());
  for (auto n : indices) {
    if (n == 0) throw Error(ErrorCode::IndexOutOfRange, "event indices start at 1");
    ranges.push_back({n - 1, n});
  }
  return std::make_shared<const DerivedModel>(std::move(base), std::move(ranges), "subsequence");
}

}  // namespace bclab
