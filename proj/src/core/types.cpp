#include "mosbench/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace mosbench {
namespace {

constexpr std::array<Task, kTaskCount> kAllTasks = {
    Task::kObject,      Task::kColor,          Task::kCounting,
    Task::kTexture,     Task::kPosition,       Task::kHoi,
    Task::kFace,        Task::kEmotion,        Task::kHuman,
    Task::kOcr,         Task::kScene,          Task::kStyle,
    Task::kShapes,      Task::kView,           Task::kWorldKnowledge,
    Task::kLinguisticStructure, Task::kImagination, Task::kMotionDirection,
    Task::kEventOrder,  Task::kComplex,
};

constexpr std::array<std::string_view, kTaskCount> kTaskNames = {
    "object",  "color",  "counting", "texture", "position",
    "hoi",     "face",   "emotion",  "human",   "ocr",
    "scene",   "style",  "shapes",   "view",    "world_knowledge",
    "linguistic_structure", "imagination", "motion_direction", "event_order", "complex",
};

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '-' || c == ' ') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view to_string(Task task) noexcept {
  return kTaskNames[static_cast<std::size_t>(task)];
}

std::optional<Task> parse_task(std::string_view text) noexcept {
  const std::string key = normalize(text);
  for (std::size_t i = 0; i < kTaskCount; ++i) {
    if (kTaskNames[i] == key) return kAllTasks[i];
  }
  return std::nullopt;
}

const std::array<Task, kTaskCount>& all_tasks() noexcept { return kAllTasks; }

std::string_view to_string(Dimension dim) noexcept {
  return dim == Dimension::kPerception ? "perception" : "correspondence";
}

std::optional<Dimension> parse_dimension(std::string_view text) noexcept {
  const std::string key = normalize(text);
  if (key == "perception") return Dimension::kPerception;
  if (key == "correspondence") return Dimension::kCorrespondence;
  return std::nullopt;
}

std::string_view to_string(Split split) noexcept {
  return split == Split::kTrain ? "train" : "test";
}

std::optional<Split> parse_split(std::string_view text) noexcept {
  const std::string key = normalize(text);
  if (key == "train") return Split::kTrain;
  if (key == "test") return Split::kTest;
  return std::nullopt;
}

void Study::canonicalize() {
  std::ranges::sort(prompts, {}, &PromptRecord::prompt_id);
  std::ranges::sort(videos, {}, &VideoRecord::video_id);
  std::ranges::sort(subjects);
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  std::ranges::sort(ratings, [](const RatingRecord& a, const RatingRecord& b) {
    return std::tie(a.video_id, a.subject_id, a.dimension, a.raw_score) <
           std::tie(b.video_id, b.subject_id, b.dimension, b.raw_score);
  });
  std::ranges::sort(votes, [](const VoteRecord& a, const VoteRecord& b) {
    return std::tie(a.video_id, a.subject_id, a.votes) <
           std::tie(b.video_id, b.subject_id, b.votes);
  });
}

}  // namespace mosbench
