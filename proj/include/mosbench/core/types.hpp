#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mosbench {

// Identifiers are opaque strings, preserved verbatim from whatever file they came from.
using PromptId = std::string;
using VideoId = std::string;
using ModelId = std::string;
using SubjectId = std::string;

enum class Task {
  kObject,
  kColor,
  kCounting,
  kTexture,
  kPosition,
  kHoi,
  kFace,
  kEmotion,
  kHuman,
  kOcr,
  kScene,
  kStyle,
  kShapes,
  kView,
  kWorldKnowledge,
  kLinguisticStructure,
  kImagination,
  kMotionDirection,
  kEventOrder,
  kComplex,
};

inline constexpr std::size_t kTaskCount = 20;

/// Canonical names, in declaration order. Parsing is case-insensitive and
/// treats '_', '-' and ' ' as equivalent separators.
std::string_view to_string(Task task) noexcept;
std::optional<Task> parse_task(std::string_view text) noexcept;
const std::array<Task, kTaskCount>& all_tasks() noexcept;

enum class Dimension { kPerception, kCorrespondence };

inline constexpr std::array<Dimension, 2> kDimensions = {Dimension::kPerception,
                                                         Dimension::kCorrespondence};

std::string_view to_string(Dimension dim) noexcept;
std::optional<Dimension> parse_dimension(std::string_view text) noexcept;

enum class Split { kTrain, kTest };

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view text) noexcept;

struct PromptRecord {
  PromptId prompt_id;
  std::string text;
  Task task = Task::kObject;
  /// Non-empty; more than one entry only for Task::kComplex.
  std::vector<std::string> subtasks;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

struct VideoRecord {
  VideoId video_id;
  PromptId prompt_id;
  ModelId model_id;
  Split split = Split::kTest;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

/// One subject's 1..5 score for one video on one dimension.
struct RatingRecord {
  SubjectId subject_id;
  VideoId video_id;
  Dimension dimension = Dimension::kPerception;
  int raw_score = 0;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

/// Yes/no answers of one subject for one video, aligned with the prompt's subtasks.
/// Attached to the (subject, video) pair, not to a dimension.
struct VoteRecord {
  SubjectId subject_id;
  VideoId video_id;
  std::vector<bool> votes;

  friend bool operator==(const VoteRecord&, const VoteRecord&) = default;
};

struct StudyMetadata {
  std::string name;
  int annotators_per_sample = 0;  // 0 = unspecified

  friend bool operator==(const StudyMetadata&, const StudyMetadata&) = default;
};

/// The whole annotation corpus. Records are plain vectors; call canonicalize()
/// to put them in the deterministic order the store uses.
struct Study {
  StudyMetadata metadata;
  std::vector<PromptRecord> prompts;
  std::vector<VideoRecord> videos;
  std::vector<SubjectId> subjects;
  std::vector<RatingRecord> ratings;
  std::vector<VoteRecord> votes;

  /// Sorts every collection by its key and de-duplicates the subject list.
  void canonicalize();

  friend bool operator==(const Study&, const Study&) = default;
};

/// Per-video pipeline output.
struct MosRecord {
  VideoId video_id;
  std::optional<double> perception_mos;
  std::optional<double> correspondence_mos;
  /// Mean of the two MOS values; empty unless both are present.
  std::optional<double> overall_avg;
  /// Empty when no vote survived.
  std::optional<bool> qa_answer;
  std::array<int, 2> contributing_counts{0, 0};

  bool complete() const noexcept { return perception_mos && correspondence_mos; }
  std::optional<double> mos(Dimension dim) const noexcept {
    return dim == Dimension::kPerception ? perception_mos : correspondence_mos;
  }

  friend bool operator==(const MosRecord&, const MosRecord&) = default;
};

struct TaskAggregate {
  std::optional<double> mean_perception;
  std::optional<double> mean_correspondence;
  std::optional<double> qa_accuracy;
  int videos = 0;
  // Videos behind each mean; they differ from `videos` when some records are incomplete.
  int n_perception = 0;
  int n_correspondence = 0;
  int n_qa = 0;

  friend bool operator==(const TaskAggregate&, const TaskAggregate&) = default;
};

struct ModelScorecard {
  ModelId model_id;
  std::optional<double> mean_perception;
  std::optional<double> mean_correspondence;
  std::optional<double> qa_accuracy;
  std::map<Task, TaskAggregate> per_task;
  int videos = 0;
  int rank = 0;

  std::optional<double> mean_overall() const noexcept {
    if (!mean_perception || !mean_correspondence) return std::nullopt;
    return (*mean_perception + *mean_correspondence) / 2.0;
  }

  friend bool operator==(const ModelScorecard&, const ModelScorecard&) = default;
};

}  // namespace mosbench
