#pragma once

#include <optional>
#include <span>
#include <string_view>

// Float64 reductions behind the statistics code. Each kernel has a scalar
// reference in `scalar::` and, when built, an AVX2+FMA variant in `avx2::`.
// The unqualified functions dispatch to the best variant the CPU supports;
// the choice is made once and can be pinned with force_isa() for testing.
//
// Variants agree to rounding (summation order differs); they are not bit-identical.

namespace mosbench::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa) noexcept;

/// True if the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Variant currently used by the dispatching functions.
Isa active_isa() noexcept;

/// Pins dispatch to `isa`, or restores automatic selection with nullopt.
/// Throws InfeasibleError if the variant is unavailable.
void force_isa(std::optional<Isa> isa);

/// Σ(x - c)² and Σ(x - c)⁴ in one pass.
struct CentralSums {
  double m2 = 0.0;
  double m4 = 0.0;
};

double sum(std::span<const double> x) noexcept;
double sum_squared_deviation(std::span<const double> x, double center) noexcept;
/// Σ(x - cx)(y - cy); spans must have equal length.
double cross_deviation(std::span<const double> x, double cx, std::span<const double> y,
                       double cy) noexcept;
/// Σ(x - y)²; spans must have equal length.
double sum_squared_difference(std::span<const double> x, std::span<const double> y) noexcept;
CentralSums central_sums(std::span<const double> x, double center) noexcept;

namespace scalar {
double sum(std::span<const double> x) noexcept;
double sum_squared_deviation(std::span<const double> x, double center) noexcept;
double cross_deviation(std::span<const double> x, double cx, std::span<const double> y,
                       double cy) noexcept;
double sum_squared_difference(std::span<const double> x, std::span<const double> y) noexcept;
CentralSums central_sums(std::span<const double> x, double center) noexcept;
}  // namespace scalar

#if defined(MOSBENCH_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x) noexcept;
double sum_squared_deviation(std::span<const double> x, double center) noexcept;
double cross_deviation(std::span<const double> x, double cx, std::span<const double> y,
                       double cy) noexcept;
double sum_squared_difference(std::span<const double> x, std::span<const double> y) noexcept;
CentralSums central_sums(std::span<const double> x, double center) noexcept;
}  // namespace avx2
#endif

/// Arithmetic mean via the dispatching sum(); x must be non-empty.
inline double mean(std::span<const double> x) noexcept {
  return sum(x) / static_cast<double>(x.size());
}

}  // namespace mosbench::simd
