#pragma once

#include <span>
#include <vector>

namespace mosbench::metrics {

struct Binarization {
  std::vector<bool> labels;  // true = member of the higher-mean cluster
  double low_center = 0.0;
  double high_center = 0.0;
  int iterations = 0;
};

/// Two-cluster 1-D Lloyd iteration seeded at min(scores) and max(scores).
/// Stops when assignments stop changing or after 100 rounds. A point equidistant
/// from both centers joins the low cluster. Throws DomainError when fewer than
/// two distinct values are present.
Binarization binarize_kmeans(std::span<const double> scores);

}  // namespace mosbench::metrics
