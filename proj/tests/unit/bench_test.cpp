#include <gtest/gtest.h>

#include <sstream>

#include "mosbench/bench/evaluate.hpp"
#include "mosbench/bench/leaderboard.hpp"
#include "mosbench/bench/report.hpp"
#include "mosbench/core/errors.hpp"
#include "mosbench/metrics/correlation.hpp"
#include "support/alignment.hpp"

using namespace mosbench;
using namespace mosbench::bench;
using testing_support::pad;

namespace {

MosRecord record(const VideoId& id, double p, double c, std::optional<bool> qa = std::nullopt) {
  MosRecord r;
  r.video_id = id;
  r.perception_mos = p;
  r.correspondence_mos = c;
  r.overall_avg = (p + c) / 2.0;
  r.qa_answer = qa;
  return r;
}

std::vector<testing_support::AlignmentRow> table() {
  return testing_support::load_alignment_table(MOSBENCH_FIXTURES "/alignment_table.csv");
}

}  // namespace

TEST(SubmissionCsvTest, ParsesOptionalColumns) {
  std::istringstream in("video_id,perception,qa\nv1,3.5,1\nv2,,0\n");
  const auto s = read_submission_csv(in, "s.csv", "m");
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(*s.entries.at("v1").perception, 3.5);
  EXPECT_FALSE(s.entries.at("v2").perception);
  EXPECT_FALSE(*s.entries.at("v2").qa);
  EXPECT_FALSE(s.entries.at("v1").correspondence);
}

TEST(SubmissionCsvTest, Errors) {
  std::istringstream none("video_id,foo\nv1,2\n");
  EXPECT_THROW(read_submission_csv(none, "s.csv", "m"), SchemaError);
  std::istringstream bad_qa("video_id,qa\nv1,yes\n");
  EXPECT_THROW(read_submission_csv(bad_qa, "s.csv", "m"), ParseError);
  std::istringstream twice("video_id,overall\nv1,2\nv1,3\n");
  EXPECT_THROW(read_submission_csv(twice, "s.csv", "m"), ParseError);
  std::istringstream bad_num("video_id,overall\nv1,abc\n");
  EXPECT_THROW(read_submission_csv(bad_num, "s.csv", "m"), ParseError);
}

TEST(SubmissionEntryTest, OverallFallsBackToMean) {
  const SubmissionEntry both{2.0, 4.0, std::nullopt, std::nullopt};
  const SubmissionEntry explicit_overall{2.0, 4.0, 9.0, std::nullopt};
  const SubmissionEntry one{2.0, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_DOUBLE_EQ(*both.overall_or_mean(), 3.0);
  EXPECT_DOUBLE_EQ(*explicit_overall.overall_or_mean(), 9.0);
  EXPECT_FALSE(one.overall_or_mean());
}

TEST(InstanceEvalTest, UsesCoveredVideosOnly) {
  std::vector<MosRecord> truth;
  MetricSubmission sub;
  const double human[] = {10, 20, 30, 40, 50};
  const double pred[] = {1, 3, 2, 4, 5};
  for (int i = 0; i < 5; ++i) {
    truth.push_back(record("v" + pad(i), human[i], human[i]));
    sub.entries["v" + pad(i)].perception = pred[i];
  }
  truth.push_back(record("v99", 0, 0));
  const auto s = instance_eval(sub, truth, ScoreColumn::kPerception);
  EXPECT_EQ(s.n, 5);
  EXPECT_EQ(s.excluded, 1);
  EXPECT_NEAR(s.srcc, 0.9, 1e-12);
  EXPECT_NEAR(s.krcc, 0.8, 1e-12);
  EXPECT_THROW(instance_eval(sub, truth, ScoreColumn::kCorrespondence), DomainError);
}

TEST(ModelAggregateTest, MeansAndExclusions) {
  const std::map<VideoId, double> values{{"a", 1}, {"b", 3}, {"c", 10}};
  const std::map<VideoId, ModelId> models{{"a", "m1"}, {"b", "m1"}, {"c", "m2"}};
  const auto out = model_aggregate(values, models, {"m1", "m2", "m3"});
  EXPECT_DOUBLE_EQ(out.means.at("m1"), 2.0);
  EXPECT_EQ(out.counts.at("m1"), 2);
  EXPECT_EQ(out.excluded, std::vector<ModelId>{"m3"});
  EXPECT_THROW(model_aggregate({{"zz", 1.0}}, models), DomainError);
}

TEST(ModelEvalTest, SharedModelsOnly) {
  const std::map<ModelId, double> pred{{"a", 1}, {"b", 2}, {"c", 3}, {"x", 100}};
  const std::map<ModelId, double> human{{"a", 2}, {"b", 4}, {"c", 6}};
  const auto s = model_eval(pred, human);
  EXPECT_EQ(s.n, 3);
  EXPECT_NEAR(s.srcc, 1.0, 1e-12);
  EXPECT_NEAR(s.rmse, std::sqrt(14.0 / 3.0), 1e-12);
  EXPECT_THROW(model_eval({{"a", 1}}, human), DomainError);
}

TEST(ZeroShotTest, RerankWithinSubset) {
  const std::map<ModelId, double> pred{{"a", 1}, {"b", 5}, {"c", 9}};
  const std::map<ModelId, double> human{{"a", 2}, {"b", 3}, {"c", 7}};
  const auto plain = zero_shot_subset_eval(pred, human, {"b", "c"});
  EXPECT_NEAR(plain.rmse, std::sqrt((4.0 + 4.0) / 2.0), 1e-12);
  const auto reranked = zero_shot_subset_eval(pred, human, {"b", "c"}, SubsetValues::kRerank);
  EXPECT_NEAR(reranked.rmse, 0.0, 1e-12);
  EXPECT_THROW(zero_shot_subset_eval(pred, human, {"a", "zz"}), DomainError);
  EXPECT_THROW(zero_shot_subset_eval(pred, human, {"a"}), DomainError);
}

TEST(MeanRankOrderTest, SmallExample) {
  // a: ranks 1,2 -> 1.5; b: 2,1 -> 1.5; c: 3,3 -> 3
  const std::map<ModelId, double> x{{"a", 9}, {"b", 8}, {"c", 1}};
  const std::map<ModelId, double> y{{"a", 5}, {"b", 6}, {"c", 1}, {"d", 0}};
  const auto r = mean_rank_order({x, y});
  EXPECT_EQ(r, (std::map<ModelId, double>{{"a", 1}, {"b", 1}, {"c", 3}}));
  EXPECT_TRUE(mean_rank_order({}).empty());
}

TEST(MeanRankOrderTest, ReproducesAlignmentRankColumn) {
  const auto rows = table();
  std::map<ModelId, double> p, c, q, hp, hc, hq;
  for (const auto& r : rows) {
    p[r.model] = r.ours_p;
    c[r.model] = r.ours_c;
    q[r.model] = r.ours_qa;
    hp[r.model] = r.human_p;
    hc[r.model] = r.human_c;
    hq[r.model] = r.human_qa;
  }
  const auto ours = mean_rank_order({p, c, q});
  const auto human = mean_rank_order({hp, hc, hq});
  int ours_match = 0;
  std::vector<double> derived, printed;
  for (const auto& r : rows) {
    if (ours.at(r.model) == r.ours_rank) ++ours_match;
    derived.push_back(human.at(r.model));
    printed.push_back(r.human_rank);
  }
  EXPECT_GE(ours_match, 29);
  EXPECT_GT(metrics::srcc(derived, printed), 0.99);
}

TEST(PerTaskTest, GroupsByTaskAndModel) {
  Study study;
  study.prompts = {{"p1", "x", Task::kColor, {"a"}}, {"p2", "y", Task::kScene, {"a"}}};
  study.videos = {{"v1", "p1", "m1", Split::kTest}, {"v2", "p2", "m1", Split::kTest},
                  {"v3", "p1", "m2", Split::kTest}};
  std::vector<MosRecord> recs{record("v1", 40, 60, true), record("v2", 60, 80, false), record("v3", 50, 50)};
  recs[2].correspondence_mos.reset();
  recs.push_back(record("ghost", 1, 1));
  const auto b = per_task_breakdown(recs, study);
  EXPECT_DOUBLE_EQ(*b.cells.at("m1").at(Task::kColor).mean_perception, 40.0);
  EXPECT_DOUBLE_EQ(*b.overall.at("m1").mean_correspondence, 70.0);
  EXPECT_DOUBLE_EQ(*b.overall.at("m1").qa_accuracy, 0.5);
  EXPECT_EQ(b.overall.at("m2").n_correspondence, 0);
  EXPECT_FALSE(b.overall.at("m2").mean_correspondence);
  EXPECT_FALSE(b.overall.at("m2").qa_accuracy);
  EXPECT_EQ(b.overall.at("m2").videos, 1);
}

TEST(LeaderboardTest, CompetitionRanksAndTieOrder) {
  std::vector<ModelScorecard> cards(3);
  cards[0].model_id = "zeta";
  cards[0].mean_perception = 50;
  cards[1].model_id = "alpha";
  cards[1].mean_perception = 50;
  cards[2].model_id = "mid";
  cards[2].mean_perception = 40;
  const auto rows = leaderboard(cards, SortKey::kPerception);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].card.model_id, "alpha");
  EXPECT_EQ(rows[1].card.model_id, "zeta");
  EXPECT_EQ(rows[1].rank, 1);
  EXPECT_EQ(rows[2].rank, 3);
  EXPECT_TRUE(leaderboard(cards, SortKey::kQaAccuracy).empty());
  const std::string md = leaderboard_markdown(rows, "Perception");
  EXPECT_NE(md.find("| 1 "), std::string::npos);
  EXPECT_NE(md.find("50.00"), std::string::npos);
}

TEST(LeaderboardTest, SortKeyNames) {
  for (auto k : {SortKey::kPerception, SortKey::kCorrespondence, SortKey::kOverall, SortKey::kQaAccuracy,
                 SortKey::kMeanRank}) {
    EXPECT_EQ(parse_sort_key(to_string(k)), k);
  }
  EXPECT_FALSE(parse_sort_key("nope"));
}

TEST(EvaluateTest, AlignmentTableThroughFullReport) {
  const auto f = testing_support::expand_alignment_table(table());
  EvalOptions options{f.zero_shot_models};
  const auto r = evaluate(f.submission, f.truth, f.study, options);
  ASSERT_TRUE(r.model.scores.at(ScoreColumn::kPerception));
  EXPECT_NEAR(r.model.scores.at(ScoreColumn::kPerception)->srcc, 0.932, 0.02);
  EXPECT_NEAR(r.model.scores.at(ScoreColumn::kCorrespondence)->srcc, 0.978, 0.02);
  EXPECT_NEAR(r.model.scores.at(ScoreColumn::kCorrespondence)->rmse, 5.014, 0.05);
  ASSERT_TRUE(r.model.qa);
  EXPECT_NEAR(r.model.qa->srcc, 0.977, 0.02);
  ASSERT_TRUE(r.model.rank);
  EXPECT_NEAR(r.model.rank->srcc, 0.977, 0.02);
  ASSERT_TRUE(r.zero_shot);
  EXPECT_EQ(r.zero_shot->rank->n, 12);
  EXPECT_NEAR(r.zero_shot->scores.at(ScoreColumn::kPerception)->rmse, 2.241, 0.05);
  EXPECT_FALSE(r.qa_from_kmeans);
  EXPECT_EQ(r.models.size(), 30u);
  EXPECT_EQ(r.ground_truth_videos, 9000);

  const auto j = to_json(r);
  EXPECT_EQ(j.at("metric"), "Ours");
  const std::string md = comparison_markdown(r);
  EXPECT_NE(md.find("Zero-shot subset"), std::string::npos);
  EXPECT_NE(md.find("Pixverse"), std::string::npos);
}

TEST(EvaluateTest, DerivesQaByKmeansWhenMissing) {
  Study study;
  study.prompts = {{"p", "x", Task::kObject, {"a"}}};
  std::vector<MosRecord> truth;
  MetricSubmission sub{"m", {}};
  for (int i = 0; i < 8; ++i) {
    const VideoId id = "v" + pad(i);
    study.videos.push_back({id, "p", "m" + std::to_string(i % 2), Split::kTest});
    truth.push_back(record(id, 10.0 * i, 10.0 * i, i >= 4));
    sub.entries[id].correspondence = i >= 4 ? 90.0 + i : 10.0 + i;
  }
  const auto r = evaluate(sub, truth, study);
  EXPECT_TRUE(r.qa_from_kmeans);
  EXPECT_EQ(r.qa_videos, 8);
  EXPECT_DOUBLE_EQ(*r.qa_accuracy, 1.0);
}

TEST(EvaluateTest, UncomputableStatisticsBecomeNotes) {
  Study study;
  study.prompts = {{"p", "x", Task::kObject, {"a"}}};
  study.videos = {{"v1", "p", "m1", Split::kTest}, {"v2", "p", "m2", Split::kTest}};
  const std::vector<MosRecord> truth{record("v1", 10, 20), record("v2", 30, 40)};
  MetricSubmission sub{"m", {}};
  sub.entries["v1"].perception = 5;
  sub.entries["v2"].perception = 5;
  sub.entries["zz"].perception = 1;
  const auto r = evaluate(sub, truth, study);
  EXPECT_EQ(r.unknown_videos, 1);
  EXPECT_FALSE(r.instance.at(ScoreColumn::kPerception));
  EXPECT_FALSE(r.instance.at(ScoreColumn::kCorrespondence));
  EXPECT_FALSE(r.notes.empty());
}
