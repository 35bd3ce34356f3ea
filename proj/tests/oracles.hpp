#pragma once

// Brute-force reference computations used by the tests. Deliberately naive.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "bclab/event_model.hpp"
#include "bclab/operator_norm.hpp"

namespace oracle {

using bclab::Index;
using bclab::IndexRange;

// Every path of a two-state chain of length L with its probability.
struct MarkovEnumeration {
  std::vector<std::uint32_t> paths;  // bit n-1 = X_n
  std::vector<double> probs;
  Index length = 0;

  MarkovEnumeration(std::array<double, 2> init, std::array<double, 4> p, Index len) : length(len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      double pr = init[bits & 1u];
      for (Index k = 1; k < len; ++k) {
        const unsigned from = (bits >> (k - 1)) & 1u;
        const unsigned to = (bits >> k) & 1u;
        pr *= p[from * 2 + to];
      }
      paths.push_back(bits);
      probs.push_back(pr);
    }
  }

  double probability(const std::function<bool(std::uint32_t)>& event) const {
    long double s = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (event(paths[i])) s += probs[i];
    }
    return static_cast<double>(s);
  }

  static bool hit(std::uint32_t bits, Index n) { return (bits >> (n - 1)) & 1u; }
  static bool any_in(std::uint32_t bits, const std::vector<IndexRange>& ranges) {
    for (const auto& r : ranges) {
      for (Index j = r.lo + 1; j <= r.hi; ++j) {
        if (hit(bits, j)) return true;
      }
    }
    return false;
  }
};

// Finite static schedule evaluated atom by atom.
struct AtomEnumeration {
  std::vector<double> weights;
  std::vector<std::vector<std::size_t>> prefix;
  std::vector<std::vector<std::size_t>> cycle;

  bool occurs(std::size_t atom, Index n) const {
    const auto& ev = n <= prefix.size() ? prefix[n - 1] : cycle[(n - 1 - prefix.size()) % cycle.size()];
    return std::find(ev.begin(), ev.end(), atom) != ev.end();
  }
  bool any_in(std::size_t atom, const std::vector<IndexRange>& ranges) const {
    for (const auto& r : ranges) {
      for (Index j = r.lo + 1; j <= r.hi; ++j) {
        if (occurs(atom, j)) return true;
      }
    }
    return false;
  }
  double probability(const std::function<bool(std::size_t)>& event) const {
    double s = 0;
    for (std::size_t a = 0; a < weights.size(); ++a) {
      if (event(a)) s += weights[a];
    }
    return s;
  }
};

// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double jacobi_max_eigenvalue(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  double best = a[0];
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a[i * n + i]);
  return best;
}

// sqrt(lambda_max(A^T A)).
inline double spectral_norm(const bclab::DenseMatrix& m) {
  const std::size_t n = m.cols;
  std::vector<double> ata(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m.rows; ++k) ata[i * n + j] += m(k, i) * m(k, j);
  return std::sqrt(std::max(0.0, jacobi_max_eigenvalue(ata, n)));
}

// Direct linear scans for the block constructions.
inline std::vector<Index> linear_theorem_a(const bclab::EventSequenceModel& model, std::size_t blocks) {
  std::vector<Index> out;
  Index prev = 0;
  for (std::size_t k = 1; k <= blocks; ++k) {
    Index n = prev + 1;
    while (model.tail_union_upper(n) > std::ldexp(1.0, -static_cast<int>(k))) ++n;
    out.push_back(n);
    prev = n;
  }
  return out;
}

inline std::vector<Index> linear_theorem_b(const bclab::EventSequenceModel& model, std::size_t blocks) {
  std::vector<Index> out;
  Index prev = 0;
  for (std::size_t k = 1; k <= blocks; ++k) {
    Index m = prev + 1;
    while (!(model.range_avoid(prev, m) < std::ldexp(1.0, -static_cast<int>(k)))) ++m;
    out.push_back(m);
    prev = m;
  }
  return out;
}

}  // namespace oracle
