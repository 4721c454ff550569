#pragma once

// Straight-line reference for the MOS pipeline. Shares nothing with src/ except the
// record types. Band and kurtosis decisions use exact integer arithmetic on the raw
// 1..5 scores, so floating-point boundary handling in the library is checked too.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mosbench/core/types.hpp"

namespace oracle {

using mosbench::Dimension;
using mosbench::Study;

struct Item {
  std::vector<std::string> subjects;
  std::vector<std::int64_t> scores;
};

// Where a score sits relative to the band mu ± k sigma of its item.
struct BandPosition {
  bool degenerate = true;  // fewer than 2 ratings or no spread
  int side = 0;            // sign of s - mu
  int edge = 0;            // sign of |s - mu| - k sigma
};

inline int sign(std::int64_t v) { return (v > 0) - (v < 0); }

inline BandPosition band_position(const Item& item, std::int64_t s) {
  const std::int64_t n = static_cast<std::int64_t>(item.scores.size());
  if (n < 2) return {};
  std::int64_t sum = 0, sum2 = 0;
  for (auto x : item.scores) {
    sum += x;
    sum2 += x * x;
  }
  const std::int64_t spread = n * sum2 - sum * sum;  // n(n-1) sigma^2
  if (spread == 0) return {};

  // kurtosis beta = n * sum(e^4) / (sum(e^2))^2 with e = n x - sum
  std::int64_t e2 = 0, e4 = 0;
  for (auto x : item.scores) {
    const std::int64_t e = n * x - sum;
    e2 += e * e;
    e4 += e * e * e * e;
  }
  const bool normal = 2 * e2 * e2 <= n * e4 && n * e4 <= 4 * e2 * e2;
  const std::int64_t k2 = normal ? 4 : 20;

  // (s - mu)^2 vs k^2 sigma^2  <=>  (n s - sum)^2 (n - 1) vs k^2 n spread
  const std::int64_t d = n * s - sum;
  return {false, sign(d), sign(d * d * (n - 1) - k2 * n * spread)};
}

struct SubjectVerdict {
  int p = 0, q = 0, n = 0;
  bool rejected = false;
};

struct DimensionResult {
  std::map<std::string, SubjectVerdict> subjects;
  std::set<std::pair<std::string, std::string>> rejected_scores;  // (subject, video)
  std::map<std::string, double> mos;
  std::map<std::string, int> contributors;
};

inline DimensionResult run_dimension(const Study& study, Dimension dim) {
  DimensionResult out;

  std::map<std::string, Item> items;
  for (const auto& r : study.ratings) {
    if (r.dimension != dim) continue;
    items[r.video_id].subjects.push_back(r.subject_id);
    items[r.video_id].scores.push_back(r.raw_score);
  }

  // Step 1: subject screening with statistics over every rater.
  for (const auto& [video, item] : items) {
    for (std::size_t i = 0; i < item.scores.size(); ++i) {
      SubjectVerdict& v = out.subjects[item.subjects[i]];
      v.n += 1;
      const BandPosition pos = band_position(item, item.scores[i]);
      if (!pos.degenerate && pos.edge >= 0) {
        if (pos.side > 0) v.p += 1;
        if (pos.side < 0) v.q += 1;
      }
    }
  }
  for (auto& [subject, v] : out.subjects) {
    const int pq = v.p + v.q;
    if (pq == 0) continue;
    // (P+Q)/N > 0.05 and |P-Q|/(P+Q) < 0.3, cross-multiplied
    v.rejected = 100 * pq > 5 * v.n && 10 * std::abs(v.p - v.q) < 3 * pq;
  }

  // Step 2: score screening with statistics over accepted subjects only.
  std::map<std::string, std::map<std::string, double>> kept;  // subject -> video -> raw
  for (const auto& [video, item] : items) {
    Item accepted;
    for (std::size_t i = 0; i < item.scores.size(); ++i) {
      if (!out.subjects[item.subjects[i]].rejected) {
        accepted.subjects.push_back(item.subjects[i]);
        accepted.scores.push_back(item.scores[i]);
      }
    }
    for (std::size_t i = 0; i < accepted.scores.size(); ++i) {
      const BandPosition pos = band_position(accepted, accepted.scores[i]);
      const bool keep = pos.degenerate || pos.edge <= 0;
      if (keep) {
        kept[accepted.subjects[i]][video] = static_cast<double>(accepted.scores[i]);
      } else {
        out.rejected_scores.insert({accepted.subjects[i], video});
      }
    }
  }

  // Step 3: per-subject z-scores over retained ratings, rescaled and averaged.
  std::map<std::string, double> sums;
  for (const auto& [subject, videos] : kept) {
    const double n = static_cast<double>(videos.size());
    if (videos.size() < 2) continue;
    double mu = 0.0;
    for (const auto& [_, x] : videos) mu += x;
    mu /= n;
    double ss = 0.0;
    for (const auto& [_, x] : videos) ss += (x - mu) * (x - mu);
    const double sigma = std::sqrt(ss / (n - 1.0));
    if (sigma == 0.0) continue;
    for (const auto& [video, x] : videos) {
      const double z = (x - mu) / sigma;
      sums[video] += 100.0 * (z + 3.0) / 6.0;
      out.contributors[video] += 1;
    }
  }
  for (const auto& [video, total] : sums) out.mos[video] = total / out.contributors[video];
  return out;
}

struct StudyResult {
  DimensionResult perception, correspondence;
  std::map<std::string, bool> qa;
};

inline StudyResult run(const Study& study) {
  StudyResult out;
  out.perception = run_dimension(study, Dimension::kPerception);
  out.correspondence = run_dimension(study, Dimension::kCorrespondence);

  // QA: count yes per subtask, strict majority, then all subtasks must be yes.
  std::map<std::string, std::vector<std::pair<int, int>>> tallies;  // video -> (yes, total) per subtask
  for (const auto& v : study.votes) {
    auto& t = tallies[v.video_id];
    if (t.size() < v.votes.size()) t.resize(v.votes.size());
    for (std::size_t i = 0; i < v.votes.size(); ++i) {
      t[i].first += v.votes[i] ? 1 : 0;
      t[i].second += 1;
    }
  }
  for (const auto& [video, t] : tallies) {
    bool all = true;
    for (const auto& [yes, total] : t) {
      if (total > 0 && !(2 * yes > total)) all = false;
    }
    out.qa[video] = all;
  }
  return out;
}

}  // namespace oracle
