#include <atomic>
#include <cstdlib>
#include <string_view>

#include "bclab/kernels.hpp"

namespace bclab::kernels {

namespace {

struct KernelTable {
  Isa isa;
  double (*compensated_sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*complement_product)(std::span<const double>);
  void (*matvec)(std::span<const double>, std::size_t, std::size_t, std::span<const double>,
                 std::span<double>);
  void (*matvec_transposed)(std::span<const double>, std::size_t, std::size_t,
                            std::span<const double>, std::span<double>);
  bool (*any_set)(std::span<const std::uint8_t>);
  std::size_t (*count_set)(std::span<const std::uint8_t>);
};

constexpr KernelTable kScalarTable{Isa::Scalar,          scalar::compensated_sum,
                                   scalar::dot,          scalar::complement_product,
                                   scalar::matvec,       scalar::matvec_transposed,
                                   scalar::any_set,      scalar::count_set};

#ifdef BCLAB_HAVE_AVX2
constexpr KernelTable kAvx2Table{Isa::Avx2,          avx2::compensated_sum,
                                 avx2::dot,          avx2::complement_product,
                                 avx2::matvec,       avx2::matvec_transposed,
                                 avx2::any_set,      avx2::count_set};
#endif

const KernelTable* initial_table() {
  if (const char* env = std::getenv("BC_LAB_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return &kScalarTable;
  }
#ifdef BCLAB_HAVE_AVX2
  if (isa_supported(Isa::Avx2)) return &kAvx2Table;
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*>& table_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

const KernelTable& table() { return *table_slot().load(std::memory_order_acquire); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(BCLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return table().isa; }

bool select_isa(Isa isa) {
  if (!isa_supported(isa)) return false;
  if (isa == Isa::Scalar) {
    table_slot().store(&kScalarTable, std::memory_order_release);
    return true;
  }
#ifdef BCLAB_HAVE_AVX2
  table_slot().store(&kAvx2Table, std::memory_order_release);
  return true;
#else
  return false;
#endif
}

double compensated_sum(std::span<const double> values) { return table().compensated_sum(values); }
double dot(std::span<const double> a, std::span<const double> b) { return table().dot(a, b); }
double complement_product(std::span<const double> p) { return table().complement_product(p); }
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  table().matvec(a, rows, cols, x, y);
}
void matvec_transposed(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<double> y) {
  table().matvec_transposed(a, rows, cols, x, y);
}
bool any_set(std::span<const std::uint8_t> flags) { return table().any_set(flags); }
std::size_t count_set(std::span<const std::uint8_t> flags) { return table().count_set(flags); }

}  // namespace bclab::kernels
