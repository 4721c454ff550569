#include "mosbench/mos/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "mosbench/qa/vote.hpp"

namespace mosbench::mos {
namespace {

using Scored = std::pair<SubjectId, double>;

// Ratings on `dim`, sorted by (video, subject) so every downstream sum has a fixed order.
std::vector<const RatingRecord*> ratings_on(const Study& study, Dimension dim) {
  std::vector<const RatingRecord*> out;
  for (const auto& r : study.ratings) {
    if (r.dimension == dim) out.push_back(&r);
  }
  std::ranges::sort(out, [](const RatingRecord* a, const RatingRecord* b) {
    return std::tie(a->video_id, a->subject_id) < std::tie(b->video_id, b->subject_id);
  });
  return out;
}

std::map<VideoId, std::vector<Scored>> group_by_item(
    const std::vector<const RatingRecord*>& ratings) {
  std::map<VideoId, std::vector<Scored>> items;
  for (const auto* r : ratings) items[r->video_id].emplace_back(r->subject_id, r->raw_score);
  return items;
}

ItemStats stats_of(const VideoId& video, Dimension dim, const std::vector<Scored>& scored) {
  std::vector<double> scores;
  scores.reserve(scored.size());
  for (const auto& [_, s] : scored) scores.push_back(s);
  return item_stats(video, dim, scores);
}

}  // namespace

std::vector<SubjectScreen> reject_subjects(const Study& study, Dimension dim) {
  std::map<SubjectId, SubjectScreen> screens;
  for (const auto& [video, scored] : group_by_item(ratings_on(study, dim))) {
    const ItemStats stats = stats_of(video, dim, scored);
    for (const auto& [subject, score] : scored) {
      auto& s = screens[subject];
      s.subject_id = subject;
      ++s.n;
      const int dev = stats.deviation(score);
      s.p += dev > 0 ? 1 : 0;
      s.q += dev < 0 ? 1 : 0;
    }
  }

  std::vector<SubjectScreen> out;
  out.reserve(screens.size());
  for (auto& [_, s] : screens) {
    const int extreme = s.p + s.q;
    // P + Q == 0 cannot pass the first test, which also guards the 0/0 ratio.
    if (extreme > 0) {
      const double share = static_cast<double>(extreme) / static_cast<double>(s.n);
      const double skew = std::abs(static_cast<double>(s.p - s.q) / static_cast<double>(extreme));
      s.rejected = share > 0.05 && skew < 0.3;
    }
    out.push_back(s);
  }
  return out;
}

ScoreScreen reject_scores(const Study& study, Dimension dim,
                          const std::set<SubjectId>& rejected_subjects) {
  std::vector<const RatingRecord*> accepted;
  for (const auto* r : ratings_on(study, dim)) {
    if (!rejected_subjects.contains(r->subject_id)) accepted.push_back(r);
  }

  ScoreScreen out;
  std::size_t cursor = 0;
  for (const auto& [video, scored] : group_by_item(accepted)) {
    const ItemStats stats = stats_of(video, dim, scored);
    // `accepted` is sorted by (video, subject), matching the order of `scored`.
    for (const auto& [_, score] : scored) {
      const RatingRecord& r = *accepted[cursor++];
      (stats.in_band(score) ? out.retained : out.rejected).push_back(r);
    }
  }

  std::set<VideoId> covered;
  for (const auto& r : out.retained) covered.insert(r.video_id);
  for (const auto& v : study.videos) {
    if (!covered.contains(v.video_id)) out.empty_items.push_back(v.video_id);
  }
  std::ranges::sort(out.empty_items);
  return out;
}

std::vector<SubjectId> RejectionReport::rejected_subjects(Dimension dim) const {
  std::vector<SubjectId> out;
  for (const auto& d : dimensions) {
    if (d.dimension != dim) continue;
    for (const auto& s : d.subjects) {
      if (s.rejected) out.push_back(s.subject_id);
    }
  }
  return out;
}

PipelineResult compute_mos(const Study& study, const PipelineOptions& options) {
  PipelineResult result;

  std::map<VideoId, MosRecord> records;
  for (const auto& v : study.videos) records[v.video_id].video_id = v.video_id;

  std::set<SubjectId> rejected_corr_subjects;
  std::set<std::pair<SubjectId, VideoId>> rejected_corr_scores;

  for (Dimension dim : kDimensions) {
    const auto d_index = static_cast<std::size_t>(dim);
    DimensionReport report;
    report.dimension = dim;
    report.subjects = reject_subjects(study, dim);

    std::set<SubjectId> rejected;
    for (const auto& s : report.subjects) {
      if (s.rejected) rejected.insert(s.subject_id);
    }
    ScoreScreen screen = reject_scores(study, dim, rejected);
    for (const auto& r : screen.rejected) {
      report.rejected_scores.push_back({r.subject_id, r.video_id, r.dimension, r.raw_score});
    }
    if (dim == Dimension::kCorrespondence) {
      rejected_corr_subjects = rejected;
      for (const auto& r : screen.rejected) rejected_corr_scores.emplace(r.subject_id, r.video_id);
    }

    // Per-subject statistics over the retained raw ratings.
    std::map<SubjectId, std::vector<const RatingRecord*>> by_subject;
    for (const auto& r : screen.retained) by_subject[r.subject_id].push_back(&r);

    std::map<VideoId, std::pair<double, int>> accum;  // sum of z', contributors
    for (auto& [subject, rated] : by_subject) {
      std::ranges::sort(rated, {}, &RatingRecord::video_id);
      std::vector<double> raw;
      raw.reserve(rated.size());
      for (const auto* r : rated) raw.push_back(r->raw_score);

      const bool enough = raw.size() >= 2;
      const SubjectStats stats = enough ? subject_stats(subject, raw) : SubjectStats{subject};
      if (!enough || stats.degenerate()) {
        report.degenerate_subjects.push_back(subject);
        if (options.degenerate_sigma == DegenerateSigmaPolicy::kExclude) {
          result.warnings.push_back(std::string(to_string(dim)) + ": subject '" + subject +
                                    "' has no usable spread (" + std::to_string(raw.size()) +
                                    " retained rating(s)); excluded from MOS");
          continue;
        }
        result.warnings.push_back(std::string(to_string(dim)) + ": subject '" + subject +
                                  "' has no usable spread; contributing midpoint 50");
        for (const auto* r : rated) {
          auto& a = accum[r->video_id];
          a.first += 50.0;
          ++a.second;
        }
        continue;
      }
      for (const auto* r : rated) {
        auto& a = accum[r->video_id];
        a.first += zscore_rescale(r->raw_score, stats);
        ++a.second;
      }
    }

    for (auto& [video, rec] : records) {
      auto it = accum.find(video);
      if (it == accum.end() || it->second.second == 0) continue;
      const double mos = it->second.first / it->second.second;
      (dim == Dimension::kPerception ? rec.perception_mos : rec.correspondence_mos) = mos;
      rec.contributing_counts[d_index] = it->second.second;
    }
    std::set<VideoId> with_mos;
    for (const auto& [video, a] : accum) {
      if (a.second > 0) with_mos.insert(video);
    }
    for (const auto& [video, _] : records) {
      if (!with_mos.contains(video)) {
        report.empty_items.push_back(video);
        result.warnings.push_back(std::string(to_string(dim)) + ": video '" + video +
                                  "' has no retained rating; record incomplete");
      }
    }
    result.report.dimensions.push_back(std::move(report));
  }

  // QA answers.
  std::map<PromptId, std::size_t> subtask_counts;
  for (const auto& p : study.prompts) subtask_counts[p.prompt_id] = p.subtasks.size();
  std::map<VideoId, std::size_t> video_subtasks;
  for (const auto& v : study.videos) {
    auto it = subtask_counts.find(v.prompt_id);
    video_subtasks[v.video_id] = it == subtask_counts.end() ? 0 : it->second;
  }

  std::vector<const VoteRecord*> votes;
  for (const auto& v : study.votes) votes.push_back(&v);
  std::ranges::sort(votes, [](const VoteRecord* a, const VoteRecord* b) {
    return std::tie(a->video_id, a->subject_id) < std::tie(b->video_id, b->subject_id);
  });
  std::map<VideoId, std::vector<std::vector<bool>>> rows;
  for (const auto* v : votes) {
    if (options.drop_rejected_votes &&
        (rejected_corr_subjects.contains(v->subject_id) ||
         rejected_corr_scores.contains({v->subject_id, v->video_id}))) {
      continue;
    }
    rows[v->video_id].push_back(v->votes);
  }
  for (auto& [video, rec] : records) {
    auto it = rows.find(video);
    if (it == rows.end()) continue;
    std::size_t count = video_subtasks[video];
    if (count == 0) {
      for (const auto& row : it->second) count = std::max(count, row.size());
    }
    const auto set = qa::make_voteset(video, it->second, count);
    const bool any = std::ranges::any_of(set.per_subtask, [](const auto& s) { return !s.empty(); });
    if (!any) continue;
    const auto answer = qa::aggregate_video(set);
    rec.qa_answer = answer.answer;
    if (answer.ties > 0) {
      result.report.qa_ties += answer.ties;
      result.warnings.push_back("qa: video '" + video + "' has " + std::to_string(answer.ties) +
                                " tied subtask(s), resolved to no");
    }
  }

  result.records.reserve(records.size());
  for (auto& [_, rec] : records) {
    if (rec.perception_mos && rec.correspondence_mos) {
      rec.overall_avg = (*rec.perception_mos + *rec.correspondence_mos) / 2.0;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace mosbench::mos
