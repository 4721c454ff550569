#pragma once

#include <span>
#include <string>
#include <vector>

namespace mosbench::metrics {

/// Two aligned series, optionally labelled (video or model ids).
struct PairedSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return x.size(); }
};

/// Spearman rank correlation, tie-aware: Pearson correlation of average ranks.
/// Throws DomainError for fewer than 2 points or a constant series.
double srcc(std::span<const double> x, std::span<const double> y);

/// Closed form 1 - 6 Σd² / (N(N² - 1)). Valid only without ties; throws DomainError otherwise.
double srcc_no_ties(std::span<const double> x, std::span<const double> y);

/// Pearson product-moment correlation. Throws DomainError on zero variance.
double plcc(std::span<const double> x, std::span<const double> y);

/// Kendall tau-a: (C - D) / (N(N - 1) / 2); tied pairs count as neither.
double krcc(std::span<const double> x, std::span<const double> y);

/// sqrt(mean((x - y)²)); needs at least one pair.
double rmse(std::span<const double> x, std::span<const double> y);

/// Fraction of positions where the two vectors agree.
double accuracy(const std::vector<bool>& pred, const std::vector<bool>& truth);

inline double srcc(const PairedSeries& s) { return srcc(s.x, s.y); }
inline double plcc(const PairedSeries& s) { return plcc(s.x, s.y); }
inline double krcc(const PairedSeries& s) { return krcc(s.x, s.y); }
inline double rmse(const PairedSeries& s) { return rmse(s.x, s.y); }

}  // namespace mosbench::metrics
