#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mosbench/bench/evaluate.hpp"

namespace mosbench::bench {

/// Human vs predicted model-level values for one model; QA in percent.
struct ModelComparison {
  ModelId model_id;
  int videos = 0;
  std::map<std::string, std::optional<double>> human;      // perception, correspondence, overall, qa, rank
  std::map<std::string, std::optional<double>> predicted;  // same keys
};

struct ModelLevel {
  std::map<ScoreColumn, std::optional<ModelStats>> scores;
  std::optional<ModelStats> qa;    // per-model QA accuracy in percent
  std::optional<ModelStats> rank;  // mean-rank order
};

struct EvalReport {
  std::string metric_name;
  int ground_truth_videos = 0;
  int submitted_videos = 0;
  int unknown_videos = 0;  // submitted ids absent from the ground truth

  std::map<ScoreColumn, std::optional<InstanceStats>> instance;
  std::optional<double> qa_accuracy;  // instance level
  int qa_videos = 0;
  bool qa_from_kmeans = false;  // predictions derived by binarizing scores

  ModelLevel model;
  std::vector<ModelId> zero_shot_models;
  std::optional<ModelLevel> zero_shot;

  std::vector<ModelId> excluded_models;
  std::vector<ModelComparison> models;
  std::vector<std::string> notes;
};

struct EvalOptions {
  /// Models for the zero-shot section; empty disables it.
  std::vector<ModelId> zero_shot_models;
};

/// Instance- and model-level comparison of a submission against pipeline ground truth.
/// Statistics that cannot be computed (too few points, constant series) are left
/// empty with an explanatory note. When the submission carries no QA answers, they
/// are derived by 2-means binarization of its correspondence scores (overall, then
/// perception, if correspondence is missing).
EvalReport evaluate(const MetricSubmission& submission, const std::vector<MosRecord>& truth,
                    const Study& study, const EvalOptions& options = {});

nlohmann::json to_json(const EvalReport& report);

/// Markdown table of per-model human and predicted values with two decimals.
std::string comparison_markdown(const EvalReport& report);

}  // namespace mosbench::bench
