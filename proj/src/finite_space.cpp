#include "bclab/finite_space.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <sstream>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"

namespace bclab {

namespace {
std::atomic<std::uint64_t> next_space_id{1};
}

FiniteSpace make_finite_space(std::vector<Atom> atoms) {
  if (atoms.empty()) throw Error(ErrorCode::EmptySpace, "a probability space needs at least one atom");
  kernels::CompensatedSum total;
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorCode::NegativeWeight, "atom '" + a.label + "' has weight " + std::to_string(a.weight));
    }
    total.add(a.weight);
  }
  if (std::abs(total.value() - 1.0) > FiniteSpace::kWeightTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total.value();
    throw Error(ErrorCode::WeightSumOutOfTolerance, msg.str());
  }
  return FiniteSpace(std::move(atoms), next_space_id.fetch_add(1));
}

Event Event::make(const FiniteSpace& space, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw Error(ErrorCode::InvalidArgument, "event lists an atom twice");
  }
  if (!members.empty() && members.back() >= space.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "atom index " + std::to_string(members.back()) +
                                                " outside space of size " + std::to_string(space.size()));
  }
  return Event(space.id(), std::move(members));
}

Event Event::full(const FiniteSpace& space) {
  std::vector<std::size_t> all(space.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return Event(space.id(), std::move(all));
}

bool Event::contains(std::size_t atom) const {
  return std::binary_search(members_.begin(), members_.end(), atom);
}

double event_probability(const FiniteSpace& space, const Event& event) {
  if (event.space_id() != space.id()) {
    throw Error(ErrorCode::SpaceMismatch, "event belongs to a different space");
  }
  std::vector<double> w;
  w.reserve(event.members().size());
  for (auto m : event.members()) {
    if (m >= space.size()) throw Error(ErrorCode::IndexOutOfRange, "atom index out of range");
    w.push_back(space.weight(m));
  }
  return kernels::compensated_sum(w);
}

AtomSet AtomSet::from_event(std::size_t atom_count, const Event& event) {
  AtomSet s(atom_count);
  for (auto m : event.members()) s.set(m);
  return s;
}

AtomSet& AtomSet::operator|=(const AtomSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

AtomSet& AtomSet::operator&=(const AtomSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

AtomSet AtomSet::complement() const {
  AtomSet out(size_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  if (const auto rem = size_ % 64; rem != 0 && !out.words_.empty()) {
    out.words_.back() &= (std::uint64_t{1} << rem) - 1;
  }
  return out;
}

bool AtomSet::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

double AtomSet::weight(std::span<const double> weights) const {
  std::vector<double> picked;
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w != 0) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(w));
      picked.push_back(weights[wi * 64 + bit]);
      w &= w - 1;
    }
  }
  return kernels::compensated_sum(picked);
}

}  // namespace bclab
