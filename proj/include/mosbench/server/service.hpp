#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mosbench/core/errors.hpp"
#include "mosbench/core/types.hpp"
#include "mosbench/store/sessions.hpp"

namespace mosbench::server {

/// Carries the HTTP status the binding should answer with.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

struct SessionState {
  std::string session_id;
  std::string study_id;
  SubjectId subject_id;
  std::vector<VideoId> video_ids;
  std::set<VideoId> completed;
  std::size_t cursor = 0;  // first uncompleted position in video_ids
  std::string opened_at;   // empty until the first next_task
  std::string closed_at;   // empty until every video is rated
};

struct Submission {
  VideoId video_id;
  int perception = 0;
  int correspondence = 0;
  std::vector<bool> votes;
};

struct StudyRequest {
  std::string study_id;
  Study study;  // prompts, videos, subjects and metadata; ratings must be empty
  int annotators_per_sample = 0;
  int sessions = 1;
  std::uint64_t seed = 0;
  bool pretest = false;
  std::map<VideoId, std::string> media_urls;
};

/// Parses a POST /studies body. Throws ServiceError(400) on any problem.
StudyRequest study_request_from_json(const nlohmann::json& body);
Submission submission_from_json(const nlohmann::json& body);

/// Session bookkeeping for annotation studies. Everything a study needs lives under
/// <data_dir>/studies/<study_id>/: study.json, sessions.json and ratings.jsonl, a journal
/// with one JSON line per event. A journal line is written with a single append, and a
/// torn last line is ignored on reload, so every submission is all-or-nothing.
/// All public members are safe to call from several threads.
class AnnotationService {
 public:
  using Clock = std::function<std::string()>;

  explicit AnnotationService(std::filesystem::path data_dir, Clock clock = {});

  /// Lays out the study, assigns sessions and persists both. 409 if the id exists.
  nlohmann::json create_study(const StudyRequest& request);

  /// Up to three uncompleted videos of one prompt, or {"done": true}. Repeated calls
  /// return the same payload until something is submitted.
  nlohmann::json next_task(const std::string& session_id);

  nlohmann::json submit_rating(const std::string& session_id, const Submission& submission);

  std::pair<std::size_t, std::size_t> progress(const std::string& session_id) const;
  nlohmann::json progress_json(const std::string& session_id) const;

  /// Ratings of the study in the ratings.csv store format.
  std::string export_ratings(const std::string& study_id) const;
  /// The study plus its ratings, ready for the MOS pipeline.
  Study export_study(const std::string& study_id) const;

  std::vector<std::string> study_ids() const;
  SessionState session(const std::string& session_id) const;

 private:
  struct StudyState {
    Study study;  // ratings and votes accumulate here
    bool pretest = false;
    std::map<VideoId, std::string> media_urls;
    std::map<PromptId, const PromptRecord*> prompts;
    std::map<VideoId, const VideoRecord*> videos;
    std::vector<std::string> session_ids;
  };

  void load_all();
  void load_study(const std::string& study_id);
  void index(StudyState& state);
  void append_journal(const std::string& study_id, const nlohmann::json& line);
  void apply_rating(StudyState& state, SessionState& session, const Submission& s);
  std::filesystem::path study_dir(const std::string& study_id) const;
  SessionState& session_locked(const std::string& session_id);
  const SessionState& session_locked(const std::string& session_id) const;

  std::filesystem::path data_dir_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, StudyState> studies_;
  std::map<std::string, SessionState> sessions_;
};

/// Study ids and session ids are restricted to [A-Za-z0-9._-], 1..64 characters.
bool valid_identifier(const std::string& id);

}  // namespace mosbench::server
