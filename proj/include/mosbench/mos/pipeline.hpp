#pragma once

#include <set>
#include <string>
#include <vector>

#include "mosbench/core/types.hpp"
#include "mosbench/mos/statistics.hpp"

namespace mosbench::mos {

/// Subject-level screening outcome for one subject on one dimension.
struct SubjectScreen {
  SubjectId subject_id;
  int p = 0;  // items where the score is at or above mu + k sigma
  int q = 0;  // items where the score is at or below mu - k sigma
  int n = 0;  // items the subject rated
  bool rejected = false;
};

/// Screens every subject who rated `dim`. Subjects are returned sorted by id.
///
/// A subject is rejected iff (P + Q) / N > 0.05 and |(P - Q) / (P + Q)| < 0.3.
/// Item statistics use every rating of the item. Items with fewer than two
/// raters or no spread count toward N but never toward P or Q.
std::vector<SubjectScreen> reject_subjects(const Study& study, Dimension dim);

struct ScoreScreen {
  std::vector<RatingRecord> retained;
  std::vector<RatingRecord> rejected;
  /// Videos of the study left without any retained rating on this dimension.
  std::vector<VideoId> empty_items;
};

/// Score-level screening over the ratings of subjects not in `rejected_subjects`.
/// Item statistics are recomputed over those ratings; single pass.
ScoreScreen reject_scores(const Study& study, Dimension dim,
                          const std::set<SubjectId>& rejected_subjects);

enum class DegenerateSigmaPolicy {
  kExclude,   // drop the subject from MOS for that dimension, with a warning
  kMidpoint,  // every rating of the subject contributes 50
};

struct PipelineOptions {
  DegenerateSigmaPolicy degenerate_sigma = DegenerateSigmaPolicy::kExclude;
  /// Also drop the QA votes of subjects rejected on the correspondence dimension
  /// and of subjects whose correspondence score for that video was rejected.
  bool drop_rejected_votes = false;
};

struct RejectedScore {
  SubjectId subject_id;
  VideoId video_id;
  Dimension dimension = Dimension::kPerception;
  int raw_score = 0;
};

struct DimensionReport {
  Dimension dimension = Dimension::kPerception;
  std::vector<SubjectScreen> subjects;
  std::vector<RejectedScore> rejected_scores;
  std::vector<VideoId> empty_items;
  std::vector<SubjectId> degenerate_subjects;
};

struct RejectionReport {
  std::vector<DimensionReport> dimensions;  // perception, correspondence
  int qa_ties = 0;                          // subtasks decided by the tie rule

  std::vector<SubjectId> rejected_subjects(Dimension dim) const;
};

struct PipelineResult {
  std::vector<MosRecord> records;  // sorted by video_id, one per study video
  RejectionReport report;
  std::vector<std::string> warnings;
};

/// Subject rejection, then score rejection, then per-subject z-scores over the
/// retained raw ratings, rescaled and averaged per video; QA answers by
/// per-subtask majority and conjunction.
PipelineResult compute_mos(const Study& study, const PipelineOptions& options = {});

}  // namespace mosbench::mos
