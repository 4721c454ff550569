#include "mosbench/bench/report.hpp"

#include <algorithm>
#include <set>

#include "mosbench/core/errors.hpp"
#include "mosbench/metrics/correlation.hpp"
#include "mosbench/metrics/kmeans.hpp"
#include "mosbench/store/outputs.hpp"

namespace mosbench::bench {
namespace {

using nlohmann::json;

constexpr ScoreColumn kColumns[] = {ScoreColumn::kPerception, ScoreColumn::kCorrespondence,
                                    ScoreColumn::kOverall};

std::optional<double> truth_value(const MosRecord& r, ScoreColumn column) {
  switch (column) {
    case ScoreColumn::kPerception:
      return r.perception_mos;
    case ScoreColumn::kCorrespondence:
      return r.correspondence_mos;
    case ScoreColumn::kOverall:
      return r.overall_avg;
  }
  return std::nullopt;
}

std::optional<double> predicted_value(const SubmissionEntry& e, ScoreColumn column) {
  switch (column) {
    case ScoreColumn::kPerception:
      return e.perception;
    case ScoreColumn::kCorrespondence:
      return e.correspondence;
    case ScoreColumn::kOverall:
      return e.overall_or_mean();
  }
  return std::nullopt;
}

template <typename F>
auto attempt(std::vector<std::string>& notes, const std::string& what, F&& f)
    -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const DomainError& e) {
    notes.push_back(what + ": " + e.what());
    return std::nullopt;
  }
}

// Per-model means of paired human/predicted values over the videos that have both.
struct PairedMeans {
  std::map<ModelId, double> human;
  std::map<ModelId, double> predicted;
  std::map<ModelId, int> counts;
};

PairedMeans paired_means(const std::map<VideoId, std::pair<double, double>>& pairs,
                         const std::map<VideoId, ModelId>& video_model) {
  std::map<VideoId, double> h, p;
  for (const auto& [video, hp] : pairs) {
    h[video] = hp.first;
    p[video] = hp.second;
  }
  auto hm = model_aggregate(h, video_model);
  auto pm = model_aggregate(p, video_model);
  return {std::move(hm.means), std::move(pm.means), std::move(hm.counts)};
}

json stats_json(const std::optional<InstanceStats>& s) {
  if (!s) return nullptr;
  return {{"srcc", s->srcc}, {"plcc", s->plcc}, {"krcc", s->krcc}, {"n", s->n}, {"excluded", s->excluded}};
}

json stats_json(const std::optional<ModelStats>& s) {
  if (!s) return nullptr;
  return {{"srcc", s->srcc}, {"plcc", s->plcc}, {"rmse", s->rmse}, {"n", s->n}};
}

json level_json(const ModelLevel& level) {
  json out;
  for (auto c : kColumns) {
    auto it = level.scores.find(c);
    out[std::string(to_string(c))] = stats_json(it == level.scores.end() ? std::nullopt : it->second);
  }
  out["qa"] = stats_json(level.qa);
  out["rank"] = stats_json(level.rank);
  return out;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(store::round_to(*v, store::kScoreDigits)) : json(nullptr);
}

}  // namespace

EvalReport evaluate(const MetricSubmission& submission, const std::vector<MosRecord>& truth,
                    const Study& study, const EvalOptions& options) {
  EvalReport report;
  report.metric_name = submission.metric_name;
  report.ground_truth_videos = static_cast<int>(truth.size());
  report.submitted_videos = static_cast<int>(submission.entries.size());
  auto& notes = report.notes;

  std::map<VideoId, ModelId> video_model;
  for (const auto& v : study.videos) video_model[v.video_id] = v.model_id;

  std::map<VideoId, const MosRecord*> truth_by_video;
  for (const auto& r : truth) {
    if (video_model.contains(r.video_id)) {
      truth_by_video[r.video_id] = &r;
    } else {
      notes.push_back("ground-truth video '" + r.video_id + "' is not in the study; ignored");
    }
  }
  for (const auto& [video, _] : submission.entries) {
    if (!truth_by_video.contains(video)) ++report.unknown_videos;
  }

  // Instance level.
  std::vector<MosRecord> truth_in_study;
  for (const auto& [_, r] : truth_by_video) truth_in_study.push_back(*r);
  for (auto c : kColumns) {
    report.instance[c] = attempt(notes, "instance " + std::string(to_string(c)),
                                 [&] { return instance_eval(submission, truth_in_study, c); });
  }

  // QA predictions: given, or derived from scores.
  std::map<VideoId, bool> qa_pred;
  for (const auto& [video, e] : submission.entries) {
    if (e.qa && truth_by_video.contains(video)) qa_pred[video] = *e.qa;
  }
  if (qa_pred.empty()) {
    for (auto c : {ScoreColumn::kCorrespondence, ScoreColumn::kOverall, ScoreColumn::kPerception}) {
      std::vector<VideoId> ids;
      std::vector<double> scores;
      for (const auto& [video, e] : submission.entries) {
        auto v = predicted_value(e, c);
        if (v && truth_by_video.contains(video)) {
          ids.push_back(video);
          scores.push_back(*v);
        }
      }
      if (scores.size() < 2) continue;
      auto bin = attempt(notes, "qa binarization", [&] { return metrics::binarize_kmeans(scores); });
      if (!bin) break;
      for (std::size_t i = 0; i < ids.size(); ++i) qa_pred[ids[i]] = bin->labels[i];
      report.qa_from_kmeans = true;
      notes.push_back("qa answers derived by 2-means binarization of " + std::string(to_string(c)) +
                      " scores");
      break;
    }
  }
  std::vector<bool> pred_bits, truth_bits;
  std::map<VideoId, std::pair<double, double>> qa_pairs;
  for (const auto& [video, p] : qa_pred) {
    const auto* r = truth_by_video.at(video);
    if (!r->qa_answer) continue;
    pred_bits.push_back(p);
    truth_bits.push_back(*r->qa_answer);
    qa_pairs[video] = {*r->qa_answer ? 100.0 : 0.0, p ? 100.0 : 0.0};
  }
  report.qa_videos = static_cast<int>(pred_bits.size());
  if (!pred_bits.empty()) report.qa_accuracy = metrics::accuracy(pred_bits, truth_bits);

  // Model level.
  std::map<ScoreColumn, PairedMeans> means;
  for (auto c : kColumns) {
    std::map<VideoId, std::pair<double, double>> pairs;
    for (const auto& [video, r] : truth_by_video) {
      auto h = truth_value(*r, c);
      auto it = submission.entries.find(video);
      if (!h || it == submission.entries.end()) continue;
      if (auto p = predicted_value(it->second, c)) pairs[video] = {*h, *p};
    }
    means[c] = paired_means(pairs, video_model);
    report.model.scores[c] =
        attempt(notes, "model " + std::string(to_string(c)),
                [&] { return model_eval(means[c].predicted, means[c].human); });
  }
  const PairedMeans qa_means = paired_means(qa_pairs, video_model);
  if (!qa_pairs.empty()) {
    report.model.qa = attempt(notes, "model qa", [&] { return model_eval(qa_means.predicted, qa_means.human); });
  }

  const auto& pm = means[ScoreColumn::kPerception];
  const auto& cm = means[ScoreColumn::kCorrespondence];
  std::vector<std::map<ModelId, double>> human_cols{pm.human, cm.human};
  std::vector<std::map<ModelId, double>> pred_cols{pm.predicted, cm.predicted};
  if (!qa_pairs.empty()) {
    human_cols.push_back(qa_means.human);
    pred_cols.push_back(qa_means.predicted);
  }
  const auto human_rank = mean_rank_order(human_cols);
  const auto pred_rank = mean_rank_order(pred_cols);
  report.model.rank = attempt(notes, "model rank", [&] { return model_eval(pred_rank, human_rank); });

  // Zero-shot subset.
  if (!options.zero_shot_models.empty()) {
    report.zero_shot_models = options.zero_shot_models;
    ModelLevel zs;
    const auto& subset = options.zero_shot_models;
    for (auto c : kColumns) {
      zs.scores[c] = attempt(notes, "zero-shot " + std::string(to_string(c)), [&] {
        return zero_shot_subset_eval(means[c].predicted, means[c].human, subset);
      });
    }
    if (!qa_pairs.empty()) {
      zs.qa = attempt(notes, "zero-shot qa",
                      [&] { return zero_shot_subset_eval(qa_means.predicted, qa_means.human, subset); });
    }
    zs.rank = attempt(notes, "zero-shot rank", [&] {
      return zero_shot_subset_eval(pred_rank, human_rank, subset, SubsetValues::kRerank);
    });
    report.zero_shot = std::move(zs);
  }

  // Per-model table.
  std::set<ModelId> all_models;
  for (const auto& [_, m] : video_model) all_models.insert(m);
  for (const auto& model : all_models) {
    ModelComparison row;
    row.model_id = model;
    auto lookup = [&](const std::map<ModelId, double>& m) -> std::optional<double> {
      auto it = m.find(model);
      return it == m.end() ? std::nullopt : std::optional<double>(it->second);
    };
    const char* names[] = {"perception", "correspondence", "overall"};
    for (std::size_t i = 0; i < 3; ++i) {
      row.human[names[i]] = lookup(means[kColumns[i]].human);
      row.predicted[names[i]] = lookup(means[kColumns[i]].predicted);
    }
    row.human["qa"] = lookup(qa_means.human);
    row.predicted["qa"] = lookup(qa_means.predicted);
    row.human["rank"] = lookup(human_rank);
    row.predicted["rank"] = lookup(pred_rank);
    if (auto it = pm.counts.find(model); it != pm.counts.end()) row.videos = it->second;
    const bool any = std::ranges::any_of(row.human, [](const auto& kv) { return kv.second.has_value(); });
    if (!any) {
      report.excluded_models.push_back(model);
      continue;
    }
    report.models.push_back(std::move(row));
  }
  return report;
}

json to_json(const EvalReport& r) {
  json out;
  out["metric"] = r.metric_name;
  out["coverage"] = {{"ground_truth_videos", r.ground_truth_videos},
                     {"submitted_videos", r.submitted_videos},
                     {"unknown_videos", r.unknown_videos}};
  json instance;
  for (auto c : kColumns) {
    auto it = r.instance.find(c);
    instance[std::string(to_string(c))] = stats_json(it == r.instance.end() ? std::nullopt : it->second);
  }
  instance["qa"] = {{"accuracy", r.qa_accuracy ? json(*r.qa_accuracy) : json(nullptr)},
                    {"n", r.qa_videos},
                    {"from_kmeans", r.qa_from_kmeans}};
  out["instance"] = instance;
  out["model"] = level_json(r.model);
  if (r.zero_shot) {
    out["zero_shot"] = level_json(*r.zero_shot);
    out["zero_shot"]["models"] = r.zero_shot_models;
  } else {
    out["zero_shot"] = nullptr;
  }
  out["excluded_models"] = r.excluded_models;
  json models = json::array();
  for (const auto& m : r.models) {
    json h, p;
    for (const auto& [k, v] : m.human) h[k] = optional_number(v);
    for (const auto& [k, v] : m.predicted) p[k] = optional_number(v);
    models.push_back({{"model_id", m.model_id}, {"videos", m.videos}, {"human", h}, {"predicted", p}});
  }
  out["models"] = models;
  out["notes"] = r.notes;
  return out;
}

std::string comparison_markdown(const EvalReport& r) {
  auto cell = [](const std::map<std::string, std::optional<double>>& m, const char* key) {
    auto it = m.find(key);
    return it != m.end() && it->second ? store::format_fixed(*it->second, store::kTableDigits)
                                       : std::string("-");
  };
  auto rank_cell = [](const std::map<std::string, std::optional<double>>& m) {
    auto it = m.find("rank");
    return it != m.end() && it->second ? std::to_string(static_cast<int>(*it->second)) : std::string("-");
  };

  std::vector<const ModelComparison*> rows;
  for (const auto& m : r.models) rows.push_back(&m);
  std::ranges::sort(rows, [](const ModelComparison* a, const ModelComparison* b) {
    const auto ra = a->human.at("rank").value_or(1e9);
    const auto rb = b->human.at("rank").value_or(1e9);
    return ra != rb ? ra < rb : a->model_id < b->model_id;
  });

  std::string out = "## " + r.metric_name + " vs human (model level)\n\n";
  out += "| Model | Perception (H) | Perception (P) | Correspondence (H) | Correspondence (P) | "
         "QA % (H) | QA % (P) | Rank (H) | Rank (P) |\n";
  out += "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto* m : rows) {
    out += "| " + m->model_id + " | " + cell(m->human, "perception") + " | " + cell(m->predicted, "perception") +
           " | " + cell(m->human, "correspondence") + " | " + cell(m->predicted, "correspondence") + " | " +
           cell(m->human, "qa") + " | " + cell(m->predicted, "qa") + " | " + rank_cell(m->human) + " | " +
           rank_cell(m->predicted) + " |\n";
  }
  auto stat_line = [](const char* label, const std::optional<ModelStats>& s) {
    if (!s) return std::string("| ") + label + " | - | - |\n";
    return std::string("| ") + label + " | " + store::format_fixed(s->srcc, 3) + " | " +
           store::format_fixed(s->rmse, 3) + " |\n";
  };
  auto level_block = [&](const std::string& title, const ModelLevel& level) {
    std::string b = "\n### " + title + "\n\n| Column | SRCC | RMSE |\n|---|---:|---:|\n";
    b += stat_line("perception", level.scores.at(ScoreColumn::kPerception));
    b += stat_line("correspondence", level.scores.at(ScoreColumn::kCorrespondence));
    b += stat_line("overall", level.scores.at(ScoreColumn::kOverall));
    b += stat_line("qa", level.qa);
    b += stat_line("rank", level.rank);
    return b;
  };
  out += level_block("All models", r.model);
  if (r.zero_shot) out += level_block("Zero-shot subset", *r.zero_shot);
  return out;
}

}  // namespace mosbench::bench
