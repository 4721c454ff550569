#include <atomic>

#include "mosbench/core/errors.hpp"
#include "mosbench/simd/reduce.hpp"

namespace mosbench::simd {
namespace {

struct KernelTable {
  Isa isa;
  double (*sum)(std::span<const double>) noexcept;
  double (*sum_squared_deviation)(std::span<const double>, double) noexcept;
  double (*cross_deviation)(std::span<const double>, double, std::span<const double>,
                            double) noexcept;
  double (*sum_squared_difference)(std::span<const double>, std::span<const double>) noexcept;
  CentralSums (*central_sums)(std::span<const double>, double) noexcept;
};

constexpr KernelTable kScalar{Isa::kScalar,           scalar::sum,
                              scalar::sum_squared_deviation, scalar::cross_deviation,
                              scalar::sum_squared_difference, scalar::central_sums};

#if defined(MOSBENCH_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::kAvx2,           avx2::sum,
                            avx2::sum_squared_deviation, avx2::cross_deviation,
                            avx2::sum_squared_difference, avx2::central_sums};
#endif

bool cpu_has_avx2() noexcept {
#if defined(MOSBENCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) noexcept {
#if defined(MOSBENCH_HAVE_AVX2)
  if (isa == Isa::kAvx2) return &kAvx2;
#endif
  (void)isa;
  return &kScalar;
}

const KernelTable* best_table() noexcept {
  return cpu_has_avx2() ? table_for(Isa::kAvx2) : &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{best_table()};
  return table;
}

const KernelTable& kernels() noexcept { return *current().load(std::memory_order_relaxed); }

}  // namespace

std::string_view to_string(Isa isa) noexcept { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
  return isa == Isa::kScalar || (isa == Isa::kAvx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return kernels().isa; }

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    current().store(best_table());
    return;
  }
  if (!isa_available(*isa)) {
    throw InfeasibleError("kernel variant '" + std::string(to_string(*isa)) +
                          "' is not available on this build/CPU");
  }
  current().store(table_for(*isa));
}

double sum(std::span<const double> x) noexcept { return kernels().sum(x); }

double sum_squared_deviation(std::span<const double> x, double center) noexcept {
  return kernels().sum_squared_deviation(x, center);
}

double cross_deviation(std::span<const double> x, double cx, std::span<const double> y,
                       double cy) noexcept {
  return kernels().cross_deviation(x, cx, y, cy);
}

double sum_squared_difference(std::span<const double> x, std::span<const double> y) noexcept {
  return kernels().sum_squared_difference(x, y);
}

CentralSums central_sums(std::span<const double> x, double center) noexcept {
  return kernels().central_sums(x, center);
}

}  // namespace mosbench::simd
