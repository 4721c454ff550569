#include "mosbench/qa/vote.hpp"

#include "mosbench/core/errors.hpp"

namespace mosbench::qa {

MajorityResult majority_vote(const std::vector<bool>& votes) {
  if (votes.empty()) throw DomainError("majority_vote: empty vote list");
  std::size_t yes = 0;
  for (bool v : votes) yes += v ? 1 : 0;
  const std::size_t no = votes.size() - yes;
  return {yes > no, yes == no};
}

VideoAnswer aggregate_video(const VoteSet& voteset) {
  VideoAnswer out{true, 0};
  bool any = false;
  for (const auto& subtask : voteset.per_subtask) {
    if (subtask.empty()) continue;
    any = true;
    const auto m = majority_vote(subtask);
    out.ties += m.tie ? 1 : 0;
    out.answer = out.answer && m.answer;
  }
  if (!any) throw DomainError("aggregate_video: no votes for video '" + voteset.video_id + "'");
  return out;
}

VoteSet make_voteset(const VideoId& video_id, const std::vector<std::vector<bool>>& subject_rows,
                     std::size_t subtask_count) {
  VoteSet set{video_id, std::vector<std::vector<bool>>(subtask_count)};
  for (const auto& row : subject_rows) {
    for (std::size_t k = 0; k < subtask_count && k < row.size(); ++k) {
      set.per_subtask[k].push_back(row[k]);
    }
  }
  return set;
}

}  // namespace mosbench::qa
