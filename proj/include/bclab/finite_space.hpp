#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bclab {

struct Atom {
  std::string label;
  double weight = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite discrete probability space. Weights are nonnegative and sum to 1
/// within 1e-12; they are never renormalized.
class FiniteSpace {
 public:
  static constexpr double kWeightTolerance = 1e-12;

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double weight(std::size_t atom) const { return atoms_.at(atom).weight; }
  /// Identity shared by copies of the same space; events carry it.
  std::uint64_t id() const noexcept { return id_; }

 private:
  friend FiniteSpace make_finite_space(std::vector<Atom> atoms);
  FiniteSpace(std::vector<Atom> atoms, std::uint64_t id) : atoms_(std::move(atoms)), id_(id) {}

  std::vector<Atom> atoms_;
  std::uint64_t id_;
};

/// Throws EmptySpace, NegativeWeight or WeightSumOutOfTolerance.
FiniteSpace make_finite_space(std::vector<Atom> atoms);

/// Set of atoms of one space, members kept strictly increasing.
class Event {
 public:
  /// Throws IndexOutOfRange for members >= space.size(), InvalidArgument for
  /// duplicates. Members may be given in any order.
  static Event make(const FiniteSpace& space, std::vector<std::size_t> members);
  static Event empty(const FiniteSpace& space) { return make(space, {}); }
  static Event full(const FiniteSpace& space);

  std::uint64_t space_id() const noexcept { return space_id_; }
  const std::vector<std::size_t>& members() const noexcept { return members_; }
  bool contains(std::size_t atom) const;

  friend bool operator==(const Event&, const Event&) = default;

 private:
  Event(std::uint64_t space_id, std::vector<std::size_t> members)
      : space_id_(space_id), members_(std::move(members)) {}

  std::uint64_t space_id_;
  std::vector<std::size_t> members_;
};

/// Compensated sum of member weights. Throws SpaceMismatch.
double event_probability(const FiniteSpace& space, const Event& event);

/// Dense bitset over the atoms of a space, used by the finite-static engine
/// for unions and intersections.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t atom_count) : words_((atom_count + 63) / 64, 0), size_(atom_count) {}
  static AtomSet from_event(std::size_t atom_count, const Event& event);

  void set(std::size_t atom) { words_[atom / 64] |= (std::uint64_t{1} << (atom % 64)); }
  bool test(std::size_t atom) const { return (words_[atom / 64] >> (atom % 64)) & 1U; }
  std::size_t atom_count() const noexcept { return size_; }

  AtomSet& operator|=(const AtomSet& other);
  AtomSet& operator&=(const AtomSet& other);
  AtomSet complement() const;
  bool none() const;

  /// Compensated sum of the weights of the members.
  double weight(std::span<const double> weights) const;

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace bclab
