#pragma once

#include <span>
#include <vector>

namespace mosbench::metrics {

enum class RankMode {
  kAverage,      // ties get the mean of the positions they occupy (1.5, 1.5, 3)
  kCompetition,  // ties share the smallest position, the next rank skips (1, 1, 3)
};

enum class RankOrder {
  kLargerIsBetter,   // scores: rank 1 is the largest value
  kSmallerIsBetter,  // ranks/errors: rank 1 is the smallest value
};

/// 1-based ranks aligned with `values`.
std::vector<double> rank(std::span<const double> values, RankMode mode,
                         RankOrder order = RankOrder::kLargerIsBetter);

}  // namespace mosbench::metrics
