#include "mosbench/mos/statistics.hpp"

#include <cmath>

#include "mosbench/core/errors.hpp"
#include "mosbench/simd/reduce.hpp"

namespace mosbench::mos {

SubjectStats subject_stats(const SubjectId& subject, std::span<const double> ratings) {
  if (ratings.size() < 2) {
    throw DomainError("subject_stats: subject '" + subject + "' has " +
                      std::to_string(ratings.size()) + " rating(s), need at least 2");
  }
  SubjectStats s{subject, simd::mean(ratings), 0.0, static_cast<int>(ratings.size())};
  s.sigma = std::sqrt(simd::sum_squared_deviation(ratings, s.mu) /
                      static_cast<double>(ratings.size() - 1));
  return s;
}

double zscore_rescale(double raw, const SubjectStats& stats) {
  if (stats.degenerate()) {
    throw DomainError("zscore_rescale: subject '" + stats.subject_id + "' has zero sigma");
  }
  const double z = (raw - stats.mu) / stats.sigma;
  return 100.0 * (z + 3.0) / 6.0;
}

double kurtosis(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("kurtosis: needs at least two values");
  const double n = static_cast<double>(values.size());
  const auto sums = simd::central_sums(values, simd::mean(values));
  if (sums.m2 == 0.0) throw DomainError("kurtosis: zero variance");
  const double m2 = sums.m2 / n;
  const double m4 = sums.m4 / n;
  return m4 / (m2 * m2);
}

double threshold_coefficient(double beta) noexcept {
  return (beta >= 2.0 && beta <= 4.0) ? 2.0 : std::sqrt(20.0);
}

int ItemStats::deviation(double score) const noexcept {
  if (!k) return 0;
  if (score >= mu + *k * sigma) return 1;
  if (score <= mu - *k * sigma) return -1;
  return 0;
}

bool ItemStats::in_band(double score) const noexcept {
  if (!k) return true;
  return mu - *k * sigma <= score && score <= mu + *k * sigma;
}

ItemStats item_stats(const VideoId& video, Dimension dim, std::span<const double> scores) {
  ItemStats s;
  s.video_id = video;
  s.dimension = dim;
  s.n = static_cast<int>(scores.size());
  if (scores.empty()) return s;
  s.mu = simd::mean(scores);
  if (scores.size() < 2) return s;
  const auto sums = simd::central_sums(scores, s.mu);
  if (sums.m2 == 0.0) return s;
  const double n = static_cast<double>(scores.size());
  s.sigma = std::sqrt(sums.m2 / (n - 1.0));
  s.beta = (sums.m4 / n) / ((sums.m2 / n) * (sums.m2 / n));
  s.k = threshold_coefficient(*s.beta);
  return s;
}

}  // namespace mosbench::mos
