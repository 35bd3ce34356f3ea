#include <immintrin.h>

#include <bit>

#include "bclab/kernels.hpp"

namespace bclab::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double hprod(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] * lanes[1]) * (lanes[2] * lanes[3]);
}

}  // namespace

double compensated_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  const double* x = values.data();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d t = _mm256_add_pd(sum, v);
    const __m256d abs_s = _mm256_andnot_pd(sign_mask, sum);
    const __m256d abs_v = _mm256_andnot_pd(sign_mask, v);
    const __m256d big_s = _mm256_cmp_pd(abs_s, abs_v, _CMP_GE_OQ);
    const __m256d c_s = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
    const __m256d c_v = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(c_v, c_s, big_s));
    sum = t;
  }
  alignas(32) double s_lanes[4];
  alignas(32) double c_lanes[4];
  _mm256_store_pd(s_lanes, sum);
  _mm256_store_pd(c_lanes, comp);
  CompensatedSum acc;
  for (int k = 0; k < 4; ++k) acc.add(s_lanes[k]);
  for (; i < n; ++i) acc.add(x[i]);
  for (int k = 0; k < 4; ++k) acc.add(c_lanes[k]);
  return acc.value();
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double complement_product(std::span<const double> p) {
  const std::size_t n = p.size();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d prod = one;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    prod = _mm256_mul_pd(prod, _mm256_sub_pd(one, _mm256_loadu_pd(p.data() + i)));
  }
  double r = hprod(prod);
  for (; i < n; ++i) r *= (1.0 - p[i]);
  return r;
}

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = dot(a.subspan(i * cols, cols), x.first(cols));
  }
}

void matvec_transposed(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<double> y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    const double* row = a.data() + i * cols;
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      _mm256_storeu_pd(y.data() + j,
                       _mm256_fmadd_pd(xi, _mm256_loadu_pd(row + j), _mm256_loadu_pd(y.data() + j)));
    }
    for (; j < cols; ++j) y[j] += x[i] * row[j];
  }
}

bool any_set(std::span<const std::uint8_t> flags) {
  const std::size_t n = flags.size();
  const auto* p = flags.data();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    if (!_mm256_testz_si256(v, v)) return true;
  }
  for (; i < n; ++i) {
    if (p[i] != 0) return true;
  }
  return false;
}

std::size_t count_set(std::span<const std::uint8_t> flags) {
  const std::size_t n = flags.size();
  const auto* p = flags.data();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const auto zero_mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, zero)));
    count += 32 - static_cast<std::size_t>(std::popcount(zero_mask));
  }
  for (; i < n; ++i) count += (p[i] != 0);
  return count;
}

}  // namespace bclab::kernels::avx2
