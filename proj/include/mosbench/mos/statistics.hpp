#pragma once

#include <optional>
#include <span>

#include "mosbench/core/types.hpp"

namespace mosbench::mos {

/// Per-subject location/scale over that subject's ratings on one dimension.
struct SubjectStats {
  SubjectId subject_id;
  double mu = 0.0;
  double sigma = 0.0;  // sample standard deviation, N - 1 denominator
  int n = 0;

  /// Identical ratings: z-scores are undefined.
  bool degenerate() const noexcept { return sigma == 0.0; }
};

/// Throws DomainError when fewer than two ratings are given. A zero sigma is
/// returned as-is and reported through degenerate().
SubjectStats subject_stats(const SubjectId& subject, std::span<const double> ratings);

/// 100 * ((raw - mu) / sigma + 3) / 6. Not clamped: |z| > 3 lands outside [0, 100].
/// Throws DomainError for a degenerate subject.
double zscore_rescale(double raw, const SubjectStats& stats);

/// Non-excess kurtosis m4 / m2² from population central moments (≈3 for Gaussian data).
/// Throws DomainError for fewer than two values or zero variance.
double kurtosis(std::span<const double> values);

/// Band width multiplier: 2 when 2 <= beta <= 4, sqrt(20) otherwise.
double threshold_coefficient(double beta) noexcept;

/// Across-rater statistics for one (video, dimension) item.
struct ItemStats {
  VideoId video_id;
  Dimension dimension = Dimension::kPerception;
  int n = 0;
  double mu = 0.0;
  double sigma = 0.0;          // sample standard deviation; 0 when n < 2
  std::optional<double> beta;  // empty when sigma == 0
  std::optional<double> k;     // empty when sigma == 0

  /// +1 if score >= mu + k sigma, -1 if score <= mu - k sigma, else 0.
  /// Items without spread (sigma == 0) never flag a deviation.
  int deviation(double score) const noexcept;

  /// mu - k sigma <= score <= mu + k sigma; with sigma == 0 every score is kept,
  /// since all ratings of such an item equal mu.
  bool in_band(double score) const noexcept;
};

ItemStats item_stats(const VideoId& video, Dimension dim, std::span<const double> scores);

}  // namespace mosbench::mos
