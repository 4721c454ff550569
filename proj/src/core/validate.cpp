#include "mosbench/core/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace mosbench {
namespace {

std::string rating_key(const RatingRecord& r) {
  return "rating[" + r.subject_id + "," + r.video_id + "," + std::string(to_string(r.dimension)) + "]";
}

std::string vote_key(const VoteRecord& v) {
  return "votes[" + v.subject_id + "," + v.video_id + "]";
}

}  // namespace

std::vector<Violation> validate_study(const Study& study) {
  std::vector<Violation> out;
  auto flag = [&out](std::string record, std::string rule, std::string message) {
    out.push_back({std::move(record), std::move(rule), std::move(message)});
  };

  if (study.metadata.annotators_per_sample < 0) {
    flag("metadata", "annotators-per-sample", "must be non-negative");
  }

  std::map<PromptId, const PromptRecord*> prompts;
  for (const auto& p : study.prompts) {
    const std::string key = "prompt[" + p.prompt_id + "]";
    if (!prompts.emplace(p.prompt_id, &p).second) flag(key, "duplicate-id", "prompt id repeated");
    if (p.subtasks.empty()) flag(key, "subtasks-empty", "prompt has no subtask descriptors");
    if (p.subtasks.size() > 1 && p.task != Task::kComplex) {
      flag(key, "subtasks-complex-only",
           "multiple subtasks on non-complex task '" + std::string(to_string(p.task)) + "'");
    }
  }

  std::map<VideoId, const VideoRecord*> videos;
  std::set<std::pair<PromptId, ModelId>> pairs;
  for (const auto& v : study.videos) {
    const std::string key = "video[" + v.video_id + "]";
    if (!videos.emplace(v.video_id, &v).second) flag(key, "duplicate-id", "video id repeated");
    if (!prompts.contains(v.prompt_id)) {
      flag(key, "missing-prompt", "references unknown prompt '" + v.prompt_id + "'");
    }
    if (!pairs.emplace(v.prompt_id, v.model_id).second) {
      flag(key, "duplicate-prompt-model",
           "(" + v.prompt_id + ", " + v.model_id + ") already has a video");
    }
  }

  std::set<SubjectId> subjects;
  for (const auto& s : study.subjects) {
    if (!subjects.insert(s).second) flag("subject[" + s + "]", "duplicate-id", "subject id repeated");
  }

  std::set<std::tuple<SubjectId, VideoId, Dimension>> seen_ratings;
  std::set<std::pair<SubjectId, VideoId>> rated_pairs;
  for (const auto& r : study.ratings) {
    const std::string key = rating_key(r);
    if (r.raw_score < 1 || r.raw_score > 5) {
      flag(key, "score-range", "raw_score " + std::to_string(r.raw_score) + " outside 1..5");
    }
    if (!videos.contains(r.video_id)) flag(key, "missing-video", "references unknown video");
    if (!subjects.contains(r.subject_id)) flag(key, "missing-subject", "references unknown subject");
    if (!seen_ratings.emplace(r.subject_id, r.video_id, r.dimension).second) {
      flag(key, "duplicate-rating", "subject rated this video/dimension more than once");
    }
    rated_pairs.emplace(r.subject_id, r.video_id);
  }

  std::set<std::pair<SubjectId, VideoId>> seen_votes;
  for (const auto& v : study.votes) {
    const std::string key = vote_key(v);
    auto video = videos.find(v.video_id);
    if (video == videos.end()) {
      flag(key, "missing-video", "references unknown video");
    } else if (auto prompt = prompts.find(video->second->prompt_id); prompt != prompts.end()) {
      if (v.votes.size() != prompt->second->subtasks.size()) {
        flag(key, "votes-length",
             std::to_string(v.votes.size()) + " votes for " +
                 std::to_string(prompt->second->subtasks.size()) + " subtasks");
      }
    }
    if (!subjects.contains(v.subject_id)) flag(key, "missing-subject", "references unknown subject");
    if (!seen_votes.emplace(v.subject_id, v.video_id).second) {
      flag(key, "duplicate-votes", "subject voted on this video more than once");
    }
    if (!rated_pairs.contains({v.subject_id, v.video_id})) {
      flag(key, "votes-without-rating", "no rating by this subject for this video");
    }
  }

  std::ranges::sort(out);
  return out;
}

std::string summarize(const std::vector<Violation>& violations, std::size_t limit) {
  std::ostringstream os;
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown == limit) break;
    os << v.record << " [" << v.rule << "] " << v.message << '\n';
    ++shown;
  }
  if (violations.size() > shown) os << "... and " << violations.size() - shown << " more\n";
  return os.str();
}

}  // namespace mosbench
