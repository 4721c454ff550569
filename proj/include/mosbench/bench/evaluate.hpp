#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mosbench/core/types.hpp"

namespace mosbench::bench {

/// One candidate metric's outputs for one video. Every field is optional.
struct SubmissionEntry {
  std::optional<double> perception;
  std::optional<double> correspondence;
  std::optional<double> overall;
  std::optional<bool> qa;

  /// The explicit overall score, else the mean of the two dimension scores.
  std::optional<double> overall_or_mean() const noexcept {
    if (overall) return overall;
    if (perception && correspondence) return (*perception + *correspondence) / 2.0;
    return std::nullopt;
  }
};

struct MetricSubmission {
  std::string metric_name;
  std::map<VideoId, SubmissionEntry> entries;
};

/// submissions.csv: video_id plus any of perception, correspondence, overall, qa.
/// Empty cells are missing values; qa is 0 or 1. Throws ParseError / SchemaError.
MetricSubmission read_submission_csv(std::istream& in, const std::string& source,
                                     std::string metric_name);

enum class ScoreColumn { kPerception, kCorrespondence, kOverall };

std::string_view to_string(ScoreColumn column) noexcept;

struct InstanceStats {
  double srcc = 0.0;
  double plcc = 0.0;
  double krcc = 0.0;
  int n = 0;         // videos in the covered intersection
  int excluded = 0;  // ground-truth videos the submission does not score
};

/// Correlations over videos that have both a ground-truth value and a prediction
/// for `column`. Throws DomainError when fewer than two videos are covered.
InstanceStats instance_eval(const MetricSubmission& submission, const std::vector<MosRecord>& truth,
                            ScoreColumn column);

struct ModelMeans {
  std::map<ModelId, double> means;
  std::map<ModelId, int> counts;
  std::vector<ModelId> excluded;  // known models without any covered video
};

/// Per-model arithmetic mean of per-video values. `known_models` lists models that
/// should appear; any of them without a value is reported in `excluded`.
/// Throws DomainError when a video has no model.
ModelMeans model_aggregate(const std::map<VideoId, double>& values,
                           const std::map<VideoId, ModelId>& video_model,
                           const std::vector<ModelId>& known_models = {});

struct ModelStats {
  double srcc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
  int n = 0;
};

/// Statistics over one point per model present in both maps. Throws DomainError
/// when fewer than two models are shared.
ModelStats model_eval(const std::map<ModelId, double>& predicted,
                      const std::map<ModelId, double>& human);

enum class SubsetValues {
  kAsIs,
  kRerank,  // values are ranks (smaller is better); re-rank within the subset first
};

/// model_eval restricted to `subset`. Throws DomainError for an unknown model id
/// or fewer than two models.
ModelStats zero_shot_subset_eval(const std::map<ModelId, double>& predicted,
                                 const std::map<ModelId, double>& human,
                                 const std::vector<ModelId>& subset,
                                 SubsetValues values = SubsetValues::kAsIs);

/// Competition rank (smaller is better) of each model by the mean of its competition
/// ranks on the given score columns (larger is better on each). Models missing from
/// any column are left out.
std::map<ModelId, double> mean_rank_order(const std::vector<std::map<ModelId, double>>& columns);

/// Per (task, model) aggregates plus per-model totals over all tasks.
struct TaskBreakdown {
  std::map<ModelId, std::map<Task, TaskAggregate>> cells;
  std::map<ModelId, TaskAggregate> overall;
};

/// Groups records by the task of each video's prompt and by model. Records whose
/// video is not in the study are ignored.
TaskBreakdown per_task_breakdown(const std::vector<MosRecord>& records, const Study& study);

/// Submission scores shaped as MosRecords so they can go through the same aggregation.
std::vector<MosRecord> as_records(const MetricSubmission& submission);

}  // namespace mosbench::bench
