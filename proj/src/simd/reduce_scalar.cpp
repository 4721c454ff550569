#include "mosbench/simd/reduce.hpp"

namespace mosbench::simd::scalar {

double sum(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double sum_squared_deviation(std::span<const double> x, double center) noexcept {
  double acc = 0.0;
  for (double v : x) {
    const double d = v - center;
    acc += d * d;
  }
  return acc;
}

double cross_deviation(std::span<const double> x, double cx, std::span<const double> y,
                       double cy) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - cx) * (y[i] - cy);
  return acc;
}

double sum_squared_difference(std::span<const double> x, std::span<const double> y) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

CentralSums central_sums(std::span<const double> x, double center) noexcept {
  CentralSums out;
  for (double v : x) {
    const double d2 = (v - center) * (v - center);
    out.m2 += d2;
    out.m4 += d2 * d2;
  }
  return out;
}

}  // namespace mosbench::simd::scalar
