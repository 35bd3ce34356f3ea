#pragma once

// Data-parallel inner loops used across the probability engines.
//
// Every kernel has a scalar reference implementation (kernels::scalar) and,
// on x86-64, an AVX2/FMA variant (kernels::avx2). The unqualified functions
// dispatch at runtime to the best variant the CPU supports. Setting the
// environment variable BC_LAB_SIMD=scalar before first use pins the scalar
// path. Variants agree to within rounding; tests/test_kernels.cpp holds the
// equivalence bounds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace bclab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
/// Switches the dispatch table. Returns false (and changes nothing) if the
/// CPU lacks the requested instruction set.
bool select_isa(Isa isa);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);
double dot(std::span<const double> a, std::span<const double> b);
/// Product of (1 - p_i).
double complement_product(std::span<const double> p);
/// y = A x for a row-major rows x cols matrix.
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
/// y = A^T x for a row-major rows x cols matrix.
void matvec_transposed(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<double> y);
bool any_set(std::span<const std::uint8_t> flags);
std::size_t count_set(std::span<const std::uint8_t> flags);

namespace scalar {
double compensated_sum(std::span<const double> values);
double dot(std::span<const double> a, std::span<const double> b);
double complement_product(std::span<const double> p);
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
void matvec_transposed(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<double> y);
bool any_set(std::span<const std::uint8_t> flags);
std::size_t count_set(std::span<const std::uint8_t> flags);
}  // namespace scalar

#ifdef BCLAB_HAVE_AVX2
namespace avx2 {
double compensated_sum(std::span<const double> values);
double dot(std::span<const double> a, std::span<const double> b);
double complement_product(std::span<const double> p);
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
void matvec_transposed(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<double> y);
bool any_set(std::span<const std::uint8_t> flags);
std::size_t count_set(std::span<const std::uint8_t> flags);
}  // namespace avx2
#endif

/// Streaming Neumaier accumulator for sums that are produced one term at a
/// time and never materialized as an array.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bclab::kernels
