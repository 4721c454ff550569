#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mosbench/core/types.hpp"

namespace mosbench::store {

/// One worklist: the videos a subject annotates in one sitting.
struct SessionAssignment {
  std::string session_id;
  SubjectId subject_id;
  std::vector<VideoId> video_ids;

  friend bool operator==(const SessionAssignment&, const SessionAssignment&) = default;
};

/// Gives every video to exactly `annotators_per_sample` distinct subjects, keeps
/// per-subject loads within one video of each other, then cuts each subject's list
/// into at most `sessions` contiguous worklists. Videos of the same prompt stay
/// adjacent so they can be shown together. Deterministic for a given seed.
/// Throws InfeasibleError when there are fewer subjects than annotators_per_sample
/// or a count is not positive.
std::vector<SessionAssignment> assign_sessions(const std::vector<VideoRecord>& videos,
                                               const std::vector<SubjectId>& subjects,
                                               int annotators_per_sample, int sessions,
                                               std::uint64_t seed);

nlohmann::json to_json(const SessionAssignment& s);
SessionAssignment session_from_json(const nlohmann::json& j, const std::string& source);

}  // namespace mosbench::store
