#pragma once

// Brute-force references for the metric, QA and data-prep properties.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "mosbench/prep/array.hpp"

namespace oracle {

// Kendall tau-a by counting every pair.
inline double kendall_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  return static_cast<double>(concordant - discordant) / (static_cast<double>(n) * (n - 1) / 2.0);
}

// Average rank: 1 + number strictly better + half the number tied (excluding self).
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double better = 0, tied = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      if (v[j] > v[i]) better += 1;
      if (v[j] == v[i]) tied += 1;
    }
    r[i] = 1 + better + tied / 2;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

// Best split of the sorted values into a low and a high part by within-cluster
// sum of squares. Returns the labels in input order (true = high part).
inline std::vector<bool> best_threshold_partition(const std::vector<double>& v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  double best = std::numeric_limits<double>::infinity();
  double cut = 0;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k] == sorted[k - 1]) continue;  // equal values cannot be separated
    double sse = 0;
    for (auto [lo, hi] : {std::pair<std::size_t, std::size_t>{0, k}, {k, sorted.size()}}) {
      double m = 0;
      for (std::size_t i = lo; i < hi; ++i) m += sorted[i];
      m /= static_cast<double>(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) sse += (sorted[i] - m) * (sorted[i] - m);
    }
    if (sse < best) {
      best = sse;
      cut = sorted[k];
    }
  }
  std::vector<bool> labels;
  for (double x : v) labels.push_back(x >= cut);
  return labels;
}

// Plain two-center Lloyd iteration from the extremes, written out without shortcuts.
// Equidistant points go low.
inline std::vector<bool> lloyd_from_extremes(const std::vector<double>& v) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  std::vector<bool> labels;
  for (int round = 0; round < 100; ++round) {
    std::vector<bool> next;
    for (double x : v) next.push_back(std::abs(x - hi) < std::abs(x - lo));
    if (next == labels) break;
    labels = next;
    double sl = 0, sh = 0, nl = 0, nh = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (labels[i]) {
        sh += v[i];
        nh += 1;
      } else {
        sl += v[i];
        nl += 1;
      }
    }
    lo = sl / nl;
    hi = sh / nh;
  }
  return labels;
}

// votes[s][t]: voter s on subtask t. Majority per subtask with ties to no, then AND.
inline bool qa_enumerated(const std::vector<std::vector<bool>>& votes, std::size_t subtasks) {
  for (std::size_t t = 0; t < subtasks; ++t) {
    int yes = 0, no = 0;
    for (const auto& row : votes) (row[t] ? yes : no) += 1;
    if (yes <= no) return false;
  }
  return true;
}

// Every position inside [y0, y1) x [x0, x1) where the P x P block of `frame` equals the
// block of `map` at (my, mx).
inline std::vector<std::pair<std::size_t, std::size_t>> block_matches(const mosbench::prep::Frame& map,
                                                                      std::size_t my, std::size_t mx,
                                                                      const mosbench::prep::Frame& frame,
                                                                      std::size_t y0, std::size_t y1,
                                                                      std::size_t x0, std::size_t x1,
                                                                      std::size_t p) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t y = y0; y + p <= y1; ++y) {
    for (std::size_t x = x0; x + p <= x1; ++x) {
      bool same = true;
      for (std::size_t dy = 0; dy < p && same; ++dy) {
        for (std::size_t dx = 0; dx < p && same; ++dx) {
          for (std::size_t k = 0; k < frame.channels() && same; ++k) {
            same = map(my + dy, mx + dx, k) == frame(y + dy, x + dx, k);
          }
        }
      }
      if (same) out.emplace_back(y, x);
    }
  }
  return out;
}

}  // namespace oracle
