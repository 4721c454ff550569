#include "mosbench/metrics/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "mosbench/core/errors.hpp"
#include "mosbench/metrics/rank.hpp"
#include "mosbench/simd/reduce.hpp"

namespace mosbench::metrics {
namespace {

void require_paired(std::span<const double> x, std::span<const double> y, std::size_t min_len,
                    const char* what) {
  if (x.size() != y.size()) {
    throw DomainError(std::string(what) + ": series lengths differ (" + std::to_string(x.size()) +
                      " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < min_len) {
    throw DomainError(std::string(what) + ": needs at least " + std::to_string(min_len) +
                      " pairs, got " + std::to_string(x.size()));
  }
}

}  // namespace

double plcc(std::span<const double> x, std::span<const double> y) {
  require_paired(x, y, 2, "plcc");
  const double mx = simd::mean(x);
  const double my = simd::mean(y);
  const double sxx = simd::sum_squared_deviation(x, mx);
  const double syy = simd::sum_squared_deviation(y, my);
  if (sxx == 0.0 || syy == 0.0) throw DomainError("plcc: zero variance series");
  const double r = simd::cross_deviation(x, mx, y, my) / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double srcc(std::span<const double> x, std::span<const double> y) {
  require_paired(x, y, 2, "srcc");
  const auto rx = rank(x, RankMode::kAverage);
  const auto ry = rank(y, RankMode::kAverage);
  try {
    return plcc(rx, ry);
  } catch (const DomainError&) {
    throw DomainError("srcc: constant series");
  }
}

double srcc_no_ties(std::span<const double> x, std::span<const double> y) {
  require_paired(x, y, 2, "srcc_no_ties");
  const auto rx = rank(x, RankMode::kAverage);
  const auto ry = rank(y, RankMode::kAverage);
  double d2 = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    if (rx[i] != std::floor(rx[i]) || ry[i] != std::floor(ry[i])) {
      throw DomainError("srcc_no_ties: input contains ties");
    }
    d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  }
  const double n = static_cast<double>(rx.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double krcc(std::span<const double> x, std::span<const double> y) {
  require_paired(x, y, 2, "krcc");
  const std::size_t n = x.size();
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (s > 0) {
        ++concordant;
      } else if (s < 0) {
        ++discordant;
      }
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(concordant - discordant) / pairs;
}

double rmse(std::span<const double> x, std::span<const double> y) {
  require_paired(x, y, 1, "rmse");
  return std::sqrt(simd::sum_squared_difference(x, y) / static_cast<double>(x.size()));
}

double accuracy(const std::vector<bool>& pred, const std::vector<bool>& truth) {
  if (pred.size() != truth.size()) {
    throw DomainError("accuracy: length mismatch (" + std::to_string(pred.size()) + " vs " +
                      std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw DomainError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace mosbench::metrics
