// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.
#include <immintrin.h>

#include "mosbench/simd/reduce.hpp"

namespace mosbench::simd::avx2 {
namespace {

inline double horizontal_sum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double sum(std::span<const double> x) noexcept {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(p + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
  double acc = horizontal_sum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += p[i];
  return acc;
}

double sum_squared_deviation(std::span<const double> x, double center) noexcept {
  const double* p = x.data();
  const std::size_t n = x.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(p + i + 4), c);
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    a1 = _mm256_fmadd_pd(d1, d1, a1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    a0 = _mm256_fmadd_pd(d, d, a0);
  }
  double acc = horizontal_sum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += (p[i] - center) * (p[i] - center);
  return acc;
}

double cross_deviation(std::span<const double> x, double cx, std::span<const double> y,
                       double cy) noexcept {
  const double* px = x.data();
  const double* py = y.data();
  const std::size_t n = x.size();
  const __m256d vx = _mm256_set1_pd(cx);
  const __m256d vy = _mm256_set1_pd(cy);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(px + i), vx),
                         _mm256_sub_pd(_mm256_loadu_pd(py + i), vy), a0);
    a1 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(px + i + 4), vx),
                         _mm256_sub_pd(_mm256_loadu_pd(py + i + 4), vy), a1);
  }
  for (; i + 4 <= n; i += 4) {
    a0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(px + i), vx),
                         _mm256_sub_pd(_mm256_loadu_pd(py + i), vy), a0);
  }
  double acc = horizontal_sum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += (px[i] - cx) * (py[i] - cy);
  return acc;
}

double sum_squared_difference(std::span<const double> x, std::span<const double> y) noexcept {
  const double* px = x.data();
  const double* py = y.data();
  const std::size_t n = x.size();
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4));
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    a1 = _mm256_fmadd_pd(d1, d1, a1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
    a0 = _mm256_fmadd_pd(d, d, a0);
  }
  double acc = horizontal_sum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += (px[i] - py[i]) * (px[i] - py[i]);
  return acc;
}

CentralSums central_sums(std::span<const double> x, double center) noexcept {
  const double* p = x.data();
  const std::size_t n = x.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d s2 = _mm256_setzero_pd();
  __m256d s4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    const __m256d d2 = _mm256_mul_pd(d, d);
    s2 = _mm256_add_pd(s2, d2);
    s4 = _mm256_fmadd_pd(d2, d2, s4);
  }
  CentralSums out{horizontal_sum(s2), horizontal_sum(s4)};
  for (; i < n; ++i) {
    const double d2 = (p[i] - center) * (p[i] - center);
    out.m2 += d2;
    out.m4 += d2 * d2;
  }
  return out;
}

}  // namespace mosbench::simd::avx2
