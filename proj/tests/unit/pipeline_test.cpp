#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mosbench/mos/pipeline.hpp"
#include "oracles/mos_oracle.hpp"
#include "support/test_support.hpp"

using namespace mosbench;
using namespace mosbench::mos;
using testing_support::pad;

namespace {

// 16 subjects alternating between two adjacent scores on every item. The first
// subject optionally gives extreme scores on chosen items.
Study banded_study(const std::vector<std::pair<int, int>>& extremes) {
  Study study;
  const int items = 20;
  for (int i = 0; i < items; ++i) {
    study.prompts.push_back({"p" + pad(i), "prompt", Task::kObject, {"a"}});
    study.videos.push_back({"v" + pad(i), "p" + pad(i), "m", Split::kTest});
  }
  for (int s = 0; s < 16; ++s) {
    const SubjectId id = "s" + pad(s);
    study.subjects.push_back(id);
    for (int i = 0; i < items; ++i) {
      const int base = i % 2 == 0 ? 3 : 2;
      int score = base + (s + i) % 2;
      if (s == 0) {
        for (auto [item, value] : extremes) {
          if (item == i) score = value;
        }
      }
      study.ratings.push_back({id, "v" + pad(i), Dimension::kPerception, score});
    }
  }
  study.canonicalize();
  return study;
}

bool rejected(const std::vector<SubjectScreen>& screens, const SubjectId& id) {
  auto it = std::ranges::find(screens, id, &SubjectScreen::subject_id);
  return it != screens.end() && it->rejected;
}

void expect_matches_oracle(const Study& study, const PipelineOptions& options = {}) {
  const auto result = compute_mos(study, options);
  const auto ref = oracle::run(study);
  for (const auto& rec : result.records) {
    for (auto dim : kDimensions) {
      const auto& r = dim == Dimension::kPerception ? ref.perception : ref.correspondence;
      auto it = r.mos.find(rec.video_id);
      ASSERT_EQ(rec.mos(dim).has_value(), it != r.mos.end()) << rec.video_id;
      if (it != r.mos.end()) EXPECT_NEAR(*rec.mos(dim), it->second, 1e-9) << rec.video_id;
    }
    auto q = ref.qa.find(rec.video_id);
    ASSERT_EQ(rec.qa_answer.has_value(), q != ref.qa.end());
    if (rec.qa_answer) EXPECT_EQ(*rec.qa_answer, q->second);
  }
  for (const auto& d : result.report.dimensions) {
    const auto& r = d.dimension == Dimension::kPerception ? ref.perception : ref.correspondence;
    std::set<SubjectId> got, want;
    for (const auto& s : d.subjects) {
      if (s.rejected) got.insert(s.subject_id);
      const auto& o = r.subjects.at(s.subject_id);
      EXPECT_EQ(s.p, o.p) << s.subject_id;
      EXPECT_EQ(s.q, o.q) << s.subject_id;
      EXPECT_EQ(s.n, o.n) << s.subject_id;
    }
    for (const auto& [id, v] : r.subjects) {
      if (v.rejected) want.insert(id);
    }
    EXPECT_EQ(got, want);
    std::set<std::pair<SubjectId, VideoId>> scores;
    for (const auto& s : d.rejected_scores) scores.emplace(s.subject_id, s.video_id);
    EXPECT_EQ(scores, r.rejected_scores);
  }
}

}  // namespace

TEST(RejectSubjectsTest, EveryoneAtTheMeanIsKept) {
  Study study;
  for (int s = 0; s < 5; ++s) {
    for (int i = 0; i < 4; ++i) study.ratings.push_back({"s" + pad(s), "v" + pad(i), Dimension::kPerception, 3});
  }
  for (const auto& screen : reject_subjects(study, Dimension::kPerception)) {
    EXPECT_EQ(screen.p + screen.q, 0);
    EXPECT_FALSE(screen.rejected);
  }
}

TEST(RejectSubjectsTest, BalancedExtremesAreRejected) {
  const Study study = banded_study({{0, 5}, {1, 1}});
  const auto screens = reject_subjects(study, Dimension::kPerception);
  const auto& s0 = screens.front();
  EXPECT_EQ(s0.subject_id, "s00");
  EXPECT_EQ(s0.p, 1);
  EXPECT_EQ(s0.q, 1);
  EXPECT_EQ(s0.n, 20);
  EXPECT_TRUE(s0.rejected);
  for (std::size_t i = 1; i < screens.size(); ++i) EXPECT_FALSE(screens[i].rejected) << screens[i].subject_id;
  expect_matches_oracle(study);
}

TEST(RejectSubjectsTest, OneSidedExtremesAreKept) {
  const Study study = banded_study({{0, 5}, {2, 5}});
  const auto screens = reject_subjects(study, Dimension::kPerception);
  EXPECT_EQ(screens.front().p, 2);
  EXPECT_EQ(screens.front().q, 0);
  EXPECT_FALSE(rejected(screens, "s00"));
  expect_matches_oracle(study);
}

TEST(RejectSubjectsTest, EmptyStudy) {
  EXPECT_TRUE(reject_subjects(Study{}, Dimension::kPerception).empty());
}

TEST(RejectSubjectsTest, IndependentOfRecordOrder) {
  Rng rng(5);
  testing_support::RandomStudyShape shape{20, 12, 12, 8, 0.9, 0.2, 2};
  for (int trial = 0; trial < 20; ++trial) {
    Study study = testing_support::random_study(rng, shape);
    Study shuffled = study;
    rng.shuffle(std::span(shuffled.ratings));
    for (auto dim : kDimensions) {
      const auto a = reject_subjects(study, dim);
      const auto b = reject_subjects(shuffled, dim);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].subject_id, b[i].subject_id);
        EXPECT_EQ(a[i].rejected, b[i].rejected);
      }
      const auto ra = reject_scores(study, dim, {});
      const auto rb = reject_scores(shuffled, dim, {});
      EXPECT_EQ(ra.rejected.size(), rb.rejected.size());
    }
  }
}

TEST(RejectScoresTest, ConstantItemKeepsAll) {
  Study study;
  for (int s = 0; s < 4; ++s) study.ratings.push_back({"s" + pad(s), "v", Dimension::kPerception, 3});
  const auto screen = reject_scores(study, Dimension::kPerception, {});
  EXPECT_EQ(screen.retained.size(), 4u);
  EXPECT_TRUE(screen.rejected.empty());
}

TEST(RejectScoresTest, HeavyTailedItemUsesWideBand) {
  Study study;
  study.videos.push_back({"v", "p", "m", Split::kTest});
  study.ratings.push_back({"s00", "v", Dimension::kPerception, 1});
  for (int s = 1; s < 15; ++s) study.ratings.push_back({"s" + pad(s), "v", Dimension::kPerception, 3});
  const auto screen = reject_scores(study, Dimension::kPerception, {});
  oracle::Item item;
  for (const auto& r : study.ratings) {
    item.subjects.push_back(r.subject_id);
    item.scores.push_back(r.raw_score);
  }
  const auto pos = oracle::band_position(item, 1);
  const bool oracle_keeps = pos.degenerate || pos.edge <= 0;
  EXPECT_EQ(screen.rejected.empty(), oracle_keeps);
  EXPECT_EQ(screen.retained.size() + screen.rejected.size(), 15u);
}

TEST(RejectScoresTest, EmptyInput) {
  const auto screen = reject_scores(Study{}, Dimension::kPerception, {});
  EXPECT_TRUE(screen.retained.empty());
  EXPECT_TRUE(screen.rejected.empty());
}

TEST(RejectScoresTest, ReportsItemsLeftEmpty) {
  Study study;
  study.videos.push_back({"v1", "p", "m", Split::kTest});
  study.videos.push_back({"v2", "p", "m", Split::kTest});
  study.ratings.push_back({"a", "v1", Dimension::kPerception, 2});
  study.ratings.push_back({"a", "v2", Dimension::kPerception, 4});
  const auto screen = reject_scores(study, Dimension::kPerception, {"a"});
  EXPECT_EQ(screen.empty_items, (std::vector<VideoId>{"v1", "v2"}));
}

TEST(ComputeMosTest, EqualRescaledScoresGiveThatScore) {
  Study study;
  study.videos = {{"v1", "p", "m", Split::kTest}, {"v2", "p", "m", Split::kTest}};
  for (const char* s : {"a", "b"}) {
    for (auto dim : kDimensions) {
      study.ratings.push_back({s, "v1", dim, 1});
      study.ratings.push_back({s, "v2", dim, 5});
    }
  }
  const auto result = compute_mos(study);
  const double low = 100.0 * (-2.0 / std::sqrt(8.0) + 3.0) / 6.0;
  EXPECT_NEAR(*result.records[0].perception_mos, low, 1e-12);
  EXPECT_NEAR(*result.records[1].perception_mos, 100.0 - low, 1e-12);
  EXPECT_EQ(result.records[0].contributing_counts[0], 2);
}

TEST(ComputeMosTest, SymmetricScoresAverageToMidpoint) {
  Study study;
  study.videos = {{"v1", "p", "m", Split::kTest}, {"v2", "p", "m", Split::kTest}};
  for (auto dim : kDimensions) {
    study.ratings.push_back({"a", "v1", dim, 1});
    study.ratings.push_back({"a", "v2", dim, 5});
    study.ratings.push_back({"b", "v1", dim, 5});
    study.ratings.push_back({"b", "v2", dim, 1});
  }
  const auto result = compute_mos(study);
  for (const auto& r : result.records) {
    EXPECT_NEAR(*r.perception_mos, 50.0, 1e-12);
    EXPECT_NEAR(*r.overall_avg, 50.0, 1e-12);
  }
}

TEST(ComputeMosTest, FiveVideosThreeSubjectsMatchOracle) {
  Study study;
  const int scores[3][5] = {{1, 2, 3, 4, 5}, {2, 2, 4, 4, 5}, {1, 3, 3, 5, 4}};
  for (int v = 0; v < 5; ++v) study.videos.push_back({"v" + pad(v), "p", "m", Split::kTest});
  for (int s = 0; s < 3; ++s) {
    for (int v = 0; v < 5; ++v) {
      study.ratings.push_back({"s" + pad(s), "v" + pad(v), Dimension::kPerception, scores[s][v]});
      study.ratings.push_back({"s" + pad(s), "v" + pad(v), Dimension::kCorrespondence, 6 - scores[s][v]});
    }
  }
  expect_matches_oracle(study);
}

TEST(ComputeMosTest, RandomSmallStudiesMatchOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    SCOPED_TRACE(trial);
    expect_matches_oracle(testing_support::random_study(rng));
  }
}

TEST(ComputeMosTest, RandomLargerStudiesWithOutliersMatchOracle) {
  Rng rng(12);
  testing_support::RandomStudyShape shape{24, 30, 10, 10, 0.9, 0.25, 3};
  int with_rejections = 0;
  for (int trial = 0; trial < 60; ++trial) {
    SCOPED_TRACE(trial);
    const Study study = testing_support::random_study(rng, shape);
    expect_matches_oracle(study);
    const auto result = compute_mos(study);
    for (const auto& d : result.report.dimensions) {
      if (!d.rejected_scores.empty() || !result.report.rejected_subjects(d.dimension).empty()) ++with_rejections;
    }
  }
  EXPECT_GT(with_rejections, 0);
}

TEST(ComputeMosTest, PerSubjectAffineTransformLeavesMosUnchanged) {
  Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Study study = testing_support::random_study(rng);
    const auto base = compute_mos(study);
    Study scaled = study;
    for (auto& r : scaled.ratings) {
      if (r.subject_id == "s00") r.raw_score = 3 * r.raw_score + 2;
    }
    const auto other = compute_mos(scaled);
    auto screened = [](const PipelineResult& r) {
      for (const auto& d : r.report.dimensions) {
        if (!d.rejected_scores.empty() || !r.report.rejected_subjects(d.dimension).empty()) return true;
      }
      return false;
    };
    if (screened(base) || screened(other)) continue;
    ++checked;
    for (std::size_t i = 0; i < base.records.size(); ++i) {
      for (auto dim : kDimensions) {
        ASSERT_EQ(base.records[i].mos(dim).has_value(), other.records[i].mos(dim).has_value());
        if (base.records[i].mos(dim)) EXPECT_NEAR(*base.records[i].mos(dim), *other.records[i].mos(dim), 1e-9);
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(ComputeMosTest, ZscoresOfASubjectHaveUnitSpread) {
  const std::vector<double> raw{1, 4, 2, 5, 5, 3};
  const auto stats = subject_stats("s", raw);
  std::vector<double> z;
  for (double r : raw) z.push_back((zscore_rescale(r, stats) * 6.0 / 100.0) - 3.0);
  double mean = 0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(z.size());
  double ss = 0;
  for (double v : z) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(mean, 0.0, 1e-9);
  EXPECT_NEAR(std::sqrt(ss / (z.size() - 1)), 1.0, 1e-9);
}

TEST(ComputeMosTest, DegenerateSubjectExcludedWithWarning) {
  Study study;
  study.videos = {{"v1", "p", "m", Split::kTest}, {"v2", "p", "m", Split::kTest}};
  for (auto dim : kDimensions) {
    study.ratings.push_back({"flat", "v1", dim, 3});
    study.ratings.push_back({"flat", "v2", dim, 3});
    study.ratings.push_back({"a", "v1", dim, 2});
    study.ratings.push_back({"a", "v2", dim, 4});
  }
  const auto excluded = compute_mos(study);
  EXPECT_EQ(excluded.records[0].contributing_counts[0], 1);
  EXPECT_FALSE(excluded.warnings.empty());
  EXPECT_EQ(excluded.report.dimensions[0].degenerate_subjects, std::vector<SubjectId>{"flat"});

  PipelineOptions midpoint;
  midpoint.degenerate_sigma = DegenerateSigmaPolicy::kMidpoint;
  const auto mid = compute_mos(study, midpoint);
  EXPECT_EQ(mid.records[0].contributing_counts[0], 2);
  const double a_low = 100.0 * (-1.0 / std::sqrt(2.0) + 3.0) / 6.0;
  EXPECT_NEAR(*mid.records[0].perception_mos, (a_low + 50.0) / 2.0, 1e-12);
}

TEST(ComputeMosTest, VideoWithoutRatingsIsIncomplete) {
  Study study;
  study.videos = {{"v1", "p", "m", Split::kTest}, {"v2", "p", "m", Split::kTest}, {"v3", "p", "m", Split::kTest}};
  for (const char* s : {"a", "b"}) {
    study.ratings.push_back({s, "v1", Dimension::kPerception, 1});
    study.ratings.push_back({s, "v2", Dimension::kPerception, 4});
    study.ratings.push_back({s, "v3", Dimension::kPerception, 5});
    study.ratings.push_back({s, "v1", Dimension::kCorrespondence, 2});
    study.ratings.push_back({s, "v2", Dimension::kCorrespondence, 5});
  }
  const auto result = compute_mos(study);
  EXPECT_TRUE(result.records[2].perception_mos.has_value());
  EXPECT_FALSE(result.records[2].correspondence_mos.has_value());
  EXPECT_FALSE(result.records[2].overall_avg.has_value());
  EXPECT_FALSE(result.records[2].complete());
  EXPECT_EQ(result.report.dimensions[1].empty_items, std::vector<VideoId>{"v3"});
}

TEST(ComputeMosTest, VotesKeptByDefaultAndDroppableForRejectedSubjects) {
  Study study = banded_study({{0, 5}, {1, 1}});
  // Mirror the perception ratings onto correspondence so s00 is rejected there too.
  const auto perception = study.ratings;
  for (auto r : perception) {
    r.dimension = Dimension::kCorrespondence;
    study.ratings.push_back(r);
  }
  // Everyone votes yes on v00 except s00 plus seven others, so s00 decides it.
  for (int s = 0; s < 16; ++s) study.votes.push_back({"s" + pad(s), "v00", {s >= 8}});
  study.canonicalize();

  const auto kept = compute_mos(study);
  ASSERT_TRUE(kept.records[0].qa_answer.has_value());
  EXPECT_FALSE(*kept.records[0].qa_answer);  // 8 yes, 8 no: tie resolves to no
  EXPECT_EQ(kept.report.qa_ties, 1);

  PipelineOptions drop;
  drop.drop_rejected_votes = true;
  const auto dropped = compute_mos(study, drop);
  ASSERT_EQ(dropped.report.rejected_subjects(Dimension::kCorrespondence), std::vector<SubjectId>{"s00"});
  EXPECT_TRUE(*dropped.records[0].qa_answer);  // 8 yes, 7 no
}

TEST(ComputeMosTest, RerunIsIdentical) {
  Rng rng(14);
  const Study study = testing_support::random_study(rng, {12, 10, 6, 6, 0.8, 0.2, 2});
  const auto a = compute_mos(study);
  const auto b = compute_mos(study);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.warnings, b.warnings);
}
