#include "mosbench/bench/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "mosbench/core/errors.hpp"
#include "mosbench/metrics/correlation.hpp"
#include "mosbench/metrics/rank.hpp"
#include "mosbench/store/csv.hpp"

namespace mosbench::bench {
namespace {

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

std::optional<double> parse_score(const std::string& text, const store::CsvReader& reader,
                                  std::string_view column) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError(reader.source(), reader.line(), std::string(column),
                     "not a finite number: '" + text + "'");
  }
  return value;
}

struct Accumulator {
  double sum = 0.0;
  int n = 0;
  std::optional<double> mean() const {
    return n ? std::optional<double>(sum / n) : std::nullopt;
  }
};

struct CellAccumulator {
  Accumulator perception, correspondence, qa;
  int videos = 0;

  void add(const MosRecord& r) {
    ++videos;
    if (r.perception_mos) {
      perception.sum += *r.perception_mos;
      ++perception.n;
    }
    if (r.correspondence_mos) {
      correspondence.sum += *r.correspondence_mos;
      ++correspondence.n;
    }
    if (r.qa_answer) {
      qa.sum += *r.qa_answer ? 1.0 : 0.0;
      ++qa.n;
    }
  }

  TaskAggregate finish() const {
    return {perception.mean(), correspondence.mean(), qa.mean(), videos,
            perception.n,      correspondence.n,      qa.n};
  }
};

}  // namespace

std::string_view to_string(ScoreColumn column) noexcept {
  switch (column) {
    case ScoreColumn::kPerception:
      return "perception";
    case ScoreColumn::kCorrespondence:
      return "correspondence";
    case ScoreColumn::kOverall:
      return "overall";
  }
  return "?";
}

MetricSubmission read_submission_csv(std::istream& in, const std::string& source,
                                     std::string metric_name) {
  store::CsvReader reader(in, source);
  reader.read_header({"video_id"});
  const bool has_p = reader.has_column("perception");
  const bool has_c = reader.has_column("correspondence");
  const bool has_o = reader.has_column("overall");
  const bool has_q = reader.has_column("qa");
  if (!has_p && !has_c && !has_o && !has_q) {
    throw SchemaError(source + ": needs at least one of perception, correspondence, overall, qa");
  }
  MetricSubmission out;
  out.metric_name = std::move(metric_name);
  while (auto row = reader.next()) {
    const auto& id = reader.field(*row, "video_id");
    SubmissionEntry e;
    if (has_p) e.perception = parse_score(reader.field(*row, "perception"), reader, "perception");
    if (has_c) {
      e.correspondence = parse_score(reader.field(*row, "correspondence"), reader, "correspondence");
    }
    if (has_o) e.overall = parse_score(reader.field(*row, "overall"), reader, "overall");
    if (has_q) {
      const auto& q = reader.field(*row, "qa");
      if (q == "1") {
        e.qa = true;
      } else if (q == "0") {
        e.qa = false;
      } else if (!q.empty()) {
        throw ParseError(source, reader.line(), "qa", "expected 0 or 1, got '" + q + "'");
      }
    }
    if (!out.entries.emplace(id, e).second) {
      throw ParseError(source, reader.line(), "video_id", "video '" + id + "' listed twice");
    }
  }
  return out;
}

InstanceStats instance_eval(const MetricSubmission& submission, const std::vector<MosRecord>& truth,
                            ScoreColumn column) {
  std::vector<const MosRecord*> sorted;
  for (const auto& r : truth) sorted.push_back(&r);
  std::ranges::sort(sorted, {}, &MosRecord::video_id);

  std::vector<double> human, predicted;
  InstanceStats out;
  for (const auto* r : sorted) {
    const auto h = truth_value(*r, column);
    if (!h) continue;
    auto it = submission.entries.find(r->video_id);
    const auto p = it == submission.entries.end() ? std::nullopt : predicted_value(it->second, column);
    if (!p) {
      ++out.excluded;
      continue;
    }
    human.push_back(*h);
    predicted.push_back(*p);
  }
  out.n = static_cast<int>(human.size());
  if (out.n < 2) {
    throw DomainError("instance_eval(" + std::string(to_string(column)) + "): " +
                      std::to_string(out.n) + " covered video(s), need at least 2");
  }
  out.srcc = metrics::srcc(predicted, human);
  out.plcc = metrics::plcc(predicted, human);
  out.krcc = metrics::krcc(predicted, human);
  return out;
}

ModelMeans model_aggregate(const std::map<VideoId, double>& values,
                           const std::map<VideoId, ModelId>& video_model,
                           const std::vector<ModelId>& known_models) {
  std::map<ModelId, Accumulator> acc;
  for (const auto& [video, value] : values) {
    auto it = video_model.find(video);
    if (it == video_model.end()) {
      throw DomainError("model_aggregate: video '" + video + "' has no model");
    }
    auto& a = acc[it->second];
    a.sum += value;
    ++a.n;
  }
  ModelMeans out;
  for (const auto& [model, a] : acc) {
    out.means[model] = a.sum / a.n;
    out.counts[model] = a.n;
  }
  std::set<ModelId> known(known_models.begin(), known_models.end());
  for (const auto& [_, model] : video_model) known.insert(model);
  for (const auto& model : known) {
    if (!out.means.contains(model)) out.excluded.push_back(model);
  }
  return out;
}

ModelStats model_eval(const std::map<ModelId, double>& predicted,
                      const std::map<ModelId, double>& human) {
  std::vector<double> p, h;
  for (const auto& [model, value] : human) {
    auto it = predicted.find(model);
    if (it == predicted.end()) continue;
    h.push_back(value);
    p.push_back(it->second);
  }
  if (h.size() < 2) {
    throw DomainError("model_eval: " + std::to_string(h.size()) + " shared model(s), need at least 2");
  }
  return {metrics::srcc(p, h), metrics::plcc(p, h), metrics::rmse(p, h), static_cast<int>(h.size())};
}

ModelStats zero_shot_subset_eval(const std::map<ModelId, double>& predicted,
                                 const std::map<ModelId, double>& human,
                                 const std::vector<ModelId>& subset, SubsetValues values) {
  if (subset.size() < 2) {
    throw DomainError("zero_shot_subset_eval: subset has " + std::to_string(subset.size()) +
                      " model(s), need at least 2");
  }
  std::vector<ModelId> ids;
  std::vector<double> p, h;
  for (const auto& model : subset) {
    auto pi = predicted.find(model);
    auto hi = human.find(model);
    if (pi == predicted.end() || hi == human.end()) {
      throw DomainError("zero_shot_subset_eval: unknown model '" + model + "'");
    }
    ids.push_back(model);
    p.push_back(pi->second);
    h.push_back(hi->second);
  }
  if (values == SubsetValues::kRerank) {
    p = metrics::rank(p, metrics::RankMode::kCompetition, metrics::RankOrder::kSmallerIsBetter);
    h = metrics::rank(h, metrics::RankMode::kCompetition, metrics::RankOrder::kSmallerIsBetter);
  }
  std::map<ModelId, double> sub_p, sub_h;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    sub_p[ids[i]] = p[i];
    sub_h[ids[i]] = h[i];
  }
  return model_eval(sub_p, sub_h);
}

std::map<ModelId, double> mean_rank_order(const std::vector<std::map<ModelId, double>>& columns) {
  std::map<ModelId, double> out;
  if (columns.empty()) return out;
  std::vector<ModelId> models;
  for (const auto& [model, _] : columns.front()) {
    if (std::ranges::all_of(columns, [&](const auto& c) { return c.contains(model); })) {
      models.push_back(model);
    }
  }
  if (models.empty()) return out;
  std::vector<double> mean_rank(models.size(), 0.0);
  for (const auto& column : columns) {
    std::vector<double> v;
    for (const auto& m : models) v.push_back(column.at(m));
    const auto r = metrics::rank(v, metrics::RankMode::kCompetition);
    for (std::size_t i = 0; i < models.size(); ++i) mean_rank[i] += r[i];
  }
  for (auto& r : mean_rank) r /= static_cast<double>(columns.size());
  const auto final_rank =
      metrics::rank(mean_rank, metrics::RankMode::kCompetition, metrics::RankOrder::kSmallerIsBetter);
  for (std::size_t i = 0; i < models.size(); ++i) out[models[i]] = final_rank[i];
  return out;
}

TaskBreakdown per_task_breakdown(const std::vector<MosRecord>& records, const Study& study) {
  std::map<PromptId, Task> task_of;
  for (const auto& p : study.prompts) task_of[p.prompt_id] = p.task;
  std::map<VideoId, std::pair<ModelId, Task>> where;
  for (const auto& v : study.videos) {
    auto it = task_of.find(v.prompt_id);
    if (it != task_of.end()) where[v.video_id] = {v.model_id, it->second};
  }

  std::vector<const MosRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::ranges::sort(sorted, {}, &MosRecord::video_id);

  std::map<ModelId, std::map<Task, CellAccumulator>> cells;
  std::map<ModelId, CellAccumulator> totals;
  for (const auto* r : sorted) {
    auto it = where.find(r->video_id);
    if (it == where.end()) continue;
    cells[it->second.first][it->second.second].add(*r);
    totals[it->second.first].add(*r);
  }

  TaskBreakdown out;
  for (const auto& [model, tasks] : cells) {
    for (const auto& [task, acc] : tasks) out.cells[model][task] = acc.finish();
    out.overall[model] = totals.at(model).finish();
  }
  return out;
}

std::vector<MosRecord> as_records(const MetricSubmission& submission) {
  std::vector<MosRecord> out;
  out.reserve(submission.entries.size());
  for (const auto& [video, e] : submission.entries) {
    MosRecord r;
    r.video_id = video;
    r.perception_mos = e.perception;
    r.correspondence_mos = e.correspondence;
    r.overall_avg = e.overall_or_mean();
    r.qa_answer = e.qa;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mosbench::bench
