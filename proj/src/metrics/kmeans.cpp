#include "mosbench/metrics/kmeans.hpp"

#include <algorithm>
#include <cmath>

#include "mosbench/core/errors.hpp"

namespace mosbench::metrics {
namespace {
constexpr int kMaxIterations = 100;
}

Binarization binarize_kmeans(std::span<const double> scores) {
  if (scores.size() < 2) throw DomainError("binarize_kmeans: needs at least two scores");
  const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
  if (*lo_it == *hi_it) throw DomainError("binarize_kmeans: all scores identical");

  Binarization out;
  out.low_center = *lo_it;
  out.high_center = *hi_it;
  out.labels.assign(scores.size(), false);

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    bool changed = iter == 1;
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t n_lo = 0, n_hi = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool high =
          std::abs(scores[i] - out.high_center) < std::abs(scores[i] - out.low_center);
      if (high != out.labels[i]) changed = true;
      out.labels[i] = high;
      if (high) {
        sum_hi += scores[i];
        ++n_hi;
      } else {
        sum_lo += scores[i];
        ++n_lo;
      }
    }
    out.iterations = iter;
    if (!changed) break;
    // min stays low and max stays high, so neither cluster empties.
    out.low_center = sum_lo / static_cast<double>(n_lo);
    out.high_center = sum_hi / static_cast<double>(n_hi);
  }
  return out;
}

}  // namespace mosbench::metrics
