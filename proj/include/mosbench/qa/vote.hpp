#pragma once

#include <vector>

#include "mosbench/core/types.hpp"

namespace mosbench::qa {

struct MajorityResult {
  bool answer = false;
  bool tie = false;  // equal yes/no counts; answer is then false
};

/// Strict majority of yes votes. Throws DomainError on an empty vote list.
MajorityResult majority_vote(const std::vector<bool>& votes);

/// Votes for one video, one vector per subtask with one entry per voting subject.
struct VoteSet {
  VideoId video_id;
  std::vector<std::vector<bool>> per_subtask;
};

struct VideoAnswer {
  bool answer = false;
  int ties = 0;  // subtasks decided by the tie rule
};

/// Majority per subtask, then AND across subtasks: the video counts as correct only
/// if every subtask is. Throws DomainError unless some subtask has at least one vote.
/// Subtasks without any vote are skipped.
VideoAnswer aggregate_video(const VoteSet& voteset);

/// Transposes per-subject vote rows (subject x subtask) into a VoteSet.
VoteSet make_voteset(const VideoId& video_id, const std::vector<std::vector<bool>>& subject_rows,
                     std::size_t subtask_count);

}  // namespace mosbench::qa
