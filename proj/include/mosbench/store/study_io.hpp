#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mosbench/core/errors.hpp"
#include "mosbench/core/types.hpp"
#include "mosbench/core/validate.hpp"

namespace mosbench::store {

inline constexpr int kSchemaVersion = 1;

enum class StudyFormat { kCsv, kJson };

/// Loaded data that parses but breaks a study invariant.
class InvalidStudyError : public InputError {
 public:
  explicit InvalidStudyError(std::vector<Violation> violations)
      : InputError("study has " + std::to_string(violations.size()) + " invariant violation(s):\n" +
                   summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// CSV layout: a directory holding
//   prompts.csv   prompt_id,task,text,subtask_count,subtask_descriptors   ('|' separated)
//   videos.csv    video_id,prompt_id,model_id,split
//   ratings.csv   subject_id,video_id,dimension,raw_score,votes           (votes: "0101", may be empty)
//   subjects.csv  subject_id              optional; otherwise derived from ratings
//   meta.csv      key,value               optional; schema_version, name, annotators_per_sample
//
// JSON layout: one file with schema_version, metadata, prompts, videos, subjects, ratings, votes.

/// Reads a study; the result is canonicalized and validated. `path` is the directory
/// for kCsv and the file for kJson. Throws ParseError, SchemaError or InvalidStudyError.
Study load_study(const std::filesystem::path& path, StudyFormat format);

/// Writes the study deterministically (canonical order). Throws Error on I/O failure.
void save_study(const Study& study, const std::filesystem::path& path, StudyFormat format);

// Single-table readers and writers, used by the annotation server and tests.
std::vector<PromptRecord> read_prompts_csv(std::istream& in, const std::string& source);
std::vector<VideoRecord> read_videos_csv(std::istream& in, const std::string& source);
/// Fills study.ratings and study.votes. Votes may sit on either dimension row of a
/// (subject, video) pair; when both rows carry votes they must agree.
void read_ratings_csv(std::istream& in, const std::string& source, Study& study);

std::string write_prompts_csv(const std::vector<PromptRecord>& prompts);
std::string write_videos_csv(const std::vector<VideoRecord>& videos);
/// Votes go on the perception row of the pair (correspondence row if there is none).
std::string write_ratings_csv(const Study& study);

nlohmann::json study_to_json(const Study& study);
Study study_from_json(const nlohmann::json& doc, const std::string& source);

nlohmann::json to_json(const PromptRecord& p);
nlohmann::json to_json(const VideoRecord& v);
PromptRecord prompt_from_json(const nlohmann::json& j, const std::string& source);
VideoRecord video_from_json(const nlohmann::json& j, const std::string& source);

}  // namespace mosbench::store
