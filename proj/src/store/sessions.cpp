#include "mosbench/store/sessions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mosbench/core/errors.hpp"
#include "mosbench/core/random.hpp"

namespace mosbench::store {

std::vector<SessionAssignment> assign_sessions(const std::vector<VideoRecord>& videos,
                                               const std::vector<SubjectId>& subjects,
                                               int annotators_per_sample, int sessions,
                                               std::uint64_t seed) {
  if (annotators_per_sample < 1) throw InfeasibleError("annotators_per_sample must be positive");
  if (sessions < 1) throw InfeasibleError("sessions must be positive");
  if (std::set<SubjectId>(subjects.begin(), subjects.end()).size() != subjects.size()) {
    throw InfeasibleError("subject list contains duplicates");
  }
  if (subjects.size() < static_cast<std::size_t>(annotators_per_sample)) {
    throw InfeasibleError("need at least " + std::to_string(annotators_per_sample) +
                          " subjects per video, only " + std::to_string(subjects.size()) +
                          " available");
  }

  Rng rng(seed);

  // Video order: prompts shuffled, each prompt's videos adjacent and sorted by id.
  std::map<PromptId, std::vector<VideoId>> by_prompt;
  for (const auto& v : videos) by_prompt[v.prompt_id].push_back(v.video_id);
  std::vector<const std::vector<VideoId>*> groups;
  for (auto& [_, ids] : by_prompt) {
    std::ranges::sort(ids);
    groups.push_back(&ids);
  }
  rng.shuffle(std::span(groups));
  std::vector<VideoId> order;
  for (const auto* g : groups) order.insert(order.end(), g->begin(), g->end());

  std::vector<SubjectId> people = subjects;
  std::ranges::sort(people);
  rng.shuffle(std::span(people));

  // The slot sequence is `order` repeated k times, cut into one contiguous run per
  // subject. Every run is at most ceil(V*k/S) <= V long, so a run never holds a
  // video twice, and each video lands in k different runs.
  const std::size_t v_count = order.size();
  const std::size_t s_count = people.size();
  const std::size_t total = v_count * static_cast<std::size_t>(annotators_per_sample);
  std::vector<SessionAssignment> out;
  if (v_count == 0) return out;

  const int width = static_cast<int>(std::to_string(sessions).size());
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < s_count; ++s) {
    const std::size_t load = total / s_count + (s < total % s_count ? 1 : 0);
    std::vector<VideoId> list;
    list.reserve(load);
    for (std::size_t i = 0; i < load; ++i) list.push_back(order[(cursor + i) % v_count]);
    cursor += load;

    const std::size_t parts = static_cast<std::size_t>(sessions);
    std::size_t begin = 0;
    for (std::size_t part = 0; part < parts; ++part) {
      const std::size_t size = list.size() / parts + (part < list.size() % parts ? 1 : 0);
      if (size == 0) continue;
      std::string index = std::to_string(part + 1);
      index.insert(0, static_cast<std::size_t>(width) - index.size(), '0');
      out.push_back({people[s] + "-s" + index, people[s],
                     std::vector<VideoId>(list.begin() + static_cast<std::ptrdiff_t>(begin),
                                          list.begin() + static_cast<std::ptrdiff_t>(begin + size))});
      begin += size;
    }
  }
  std::ranges::sort(out, {}, &SessionAssignment::session_id);
  return out;
}

nlohmann::json to_json(const SessionAssignment& s) {
  return {{"session_id", s.session_id}, {"subject_id", s.subject_id}, {"video_ids", s.video_ids}};
}

SessionAssignment session_from_json(const nlohmann::json& j, const std::string& source) {
  try {
    return {j.at("session_id").get<std::string>(), j.at("subject_id").get<std::string>(),
            j.at("video_ids").get<std::vector<std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, "session", e.what());
  }
}

}  // namespace mosbench::store
