#include "mosbench/server/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "mosbench/core/validate.hpp"
#include "mosbench/store/atomic_file.hpp"
#include "mosbench/store/study_io.hpp"

namespace mosbench::server {
namespace {

using nlohmann::json;

ServiceError bad_request(const std::string& code, const std::string& message) {
  return ServiceError(400, code, message);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename T>
T required(const json& body, const char* key) {
  if (!body.contains(key)) throw bad_request("missing_field", std::string("missing field '") + key + "'");
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw bad_request("bad_field", std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T optional_field(const json& body, const char* key, T fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  return required<T>(body, key);
}

int likert(const json& body, const char* key) {
  if (!body.contains(key)) throw bad_request("missing_field", std::string("missing field '") + key + "'");
  const json& v = body.at(key);
  if (!v.is_number_integer()) throw bad_request("bad_field", std::string("'") + key + "' must be an integer");
  const auto score = v.get<long long>();
  if (score < 1 || score > 5) {
    throw bad_request("score_range", std::string("'") + key + "' must be in 1..5, got " + std::to_string(score));
  }
  return static_cast<int>(score);
}

json progress_of(const SessionState& s) {
  return {{"completed", s.completed.size()}, {"total", s.video_ids.size()}};
}

void advance_cursor(SessionState& s) {
  while (s.cursor < s.video_ids.size() && s.completed.contains(s.video_ids[s.cursor])) ++s.cursor;
}

}  // namespace

bool valid_identifier(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::ranges::all_of(id, [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

StudyRequest study_request_from_json(const json& body) {
  if (!body.is_object()) throw bad_request("bad_body", "expected a JSON object");
  StudyRequest r;
  r.study_id = required<std::string>(body, "study_id");
  r.study.metadata.name = optional_field<std::string>(body, "name", r.study_id);
  r.annotators_per_sample = required<int>(body, "annotators_per_sample");
  r.study.metadata.annotators_per_sample = r.annotators_per_sample;
  r.sessions = optional_field<int>(body, "sessions", 1);
  r.seed = optional_field<std::uint64_t>(body, "seed", 0);
  r.pretest = optional_field<bool>(body, "pretest", false);
  r.media_urls = optional_field<std::map<VideoId, std::string>>(body, "media_urls", {});
  r.study.subjects = required<std::vector<SubjectId>>(body, "subjects");
  try {
    for (const auto& p : required<json>(body, "prompts")) {
      r.study.prompts.push_back(store::prompt_from_json(p, "prompts"));
    }
    for (const auto& v : required<json>(body, "videos")) {
      r.study.videos.push_back(store::video_from_json(v, "videos"));
    }
  } catch (const InputError& e) {
    throw bad_request("bad_field", e.what());
  }
  return r;
}

Submission submission_from_json(const json& body) {
  if (!body.is_object()) throw bad_request("bad_body", "expected a JSON object");
  Submission s;
  s.video_id = required<std::string>(body, "video_id");
  s.perception = likert(body, "perception");
  s.correspondence = likert(body, "correspondence");
  if (!body.contains("votes")) throw bad_request("missing_votes", "missing field 'votes'");
  const json& votes = body.at("votes");
  if (!votes.is_array()) throw bad_request("bad_field", "'votes' must be an array of booleans");
  for (const auto& v : votes) {
    if (!v.is_boolean()) throw bad_request("bad_field", "'votes' must be an array of booleans");
    s.votes.push_back(v.get<bool>());
  }
  return s;
}

AnnotationService::AnnotationService(std::filesystem::path data_dir, Clock clock)
    : data_dir_(std::move(data_dir)), clock_(clock ? std::move(clock) : Clock(utc_now)) {
  std::filesystem::create_directories(data_dir_ / "studies");
  load_all();
}

std::filesystem::path AnnotationService::study_dir(const std::string& study_id) const {
  return data_dir_ / "studies" / study_id;
}

void AnnotationService::load_all() {
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir_ / "studies")) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "sessions.json")) {
      ids.push_back(entry.path().filename().string());
    }
  }
  std::ranges::sort(ids);
  for (const auto& id : ids) load_study(id);
}

void AnnotationService::index(StudyState& state) {
  state.prompts.clear();
  state.videos.clear();
  for (const auto& p : state.study.prompts) state.prompts[p.prompt_id] = &p;
  for (const auto& v : state.study.videos) state.videos[v.video_id] = &v;
}

void AnnotationService::load_study(const std::string& study_id) {
  const auto dir = study_dir(study_id);
  StudyState& state = studies_[study_id];
  state.study = store::study_from_json(json::parse(store::read_file(dir / "study.json")),
                                       (dir / "study.json").string());
  index(state);

  const json sessions = json::parse(store::read_file(dir / "sessions.json"));
  state.pretest = sessions.value("pretest", false);
  state.media_urls = sessions.value("media_urls", std::map<VideoId, std::string>{});
  for (const auto& s : sessions.at("sessions")) {
    const auto a = store::session_from_json(s, (dir / "sessions.json").string());
    SessionState st;
    st.session_id = a.session_id;
    st.study_id = study_id;
    st.subject_id = a.subject_id;
    st.video_ids = a.video_ids;
    state.session_ids.push_back(st.session_id);
    sessions_[st.session_id] = std::move(st);
  }

  // Replay the journal. A line without its newline is a torn write: cut it off so the
  // next append starts on a clean line.
  const auto journal = dir / "ratings.jsonl";
  const std::string text = std::filesystem::exists(journal) ? store::read_file(journal) : std::string();
  std::size_t good = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    const json line = json::parse(text.substr(pos, nl - pos), nullptr, false);
    if (line.is_discarded()) break;
    auto it = sessions_.find(line.value("session_id", ""));
    if (it != sessions_.end()) {
      SessionState& session = it->second;
      const auto type = line.value("type", "");
      if (type == "open" && session.opened_at.empty()) {
        session.opened_at = line.value("at", "");
      } else if (type == "rating") {
        Submission s{line.at("video_id").get<std::string>(), line.at("perception").get<int>(),
                     line.at("correspondence").get<int>(), line.at("votes").get<std::vector<bool>>()};
        apply_rating(state, session, s);
        if (session.completed.size() == session.video_ids.size()) session.closed_at = line.value("at", "");
      }
    }
    pos = good = nl + 1;
  }
  if (good < text.size()) std::filesystem::resize_file(journal, good);
}

void AnnotationService::append_journal(const std::string& study_id, const json& line) {
  const std::string text = line.dump() + "\n";
  const auto path = study_dir(study_id) / "ratings.jsonl";
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw ServiceError(500, "io_error", "cannot open journal " + path.string());
  const ssize_t written = ::write(fd, text.data(), text.size());
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (written != static_cast<ssize_t>(text.size()) || !synced) {
    throw ServiceError(500, "io_error", "failed to append to " + path.string());
  }
}

void AnnotationService::apply_rating(StudyState& state, SessionState& session, const Submission& s) {
  state.study.ratings.push_back({session.subject_id, s.video_id, Dimension::kPerception, s.perception});
  state.study.ratings.push_back({session.subject_id, s.video_id, Dimension::kCorrespondence, s.correspondence});
  state.study.votes.push_back({session.subject_id, s.video_id, s.votes});
  session.completed.insert(s.video_id);
  advance_cursor(session);
}

SessionState& AnnotationService::session_locked(const std::string& session_id) {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + session_id + "'");
  return it->second;
}

const SessionState& AnnotationService::session_locked(const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + session_id + "'");
  return it->second;
}

json AnnotationService::create_study(const StudyRequest& request) {
  if (!valid_identifier(request.study_id)) {
    throw bad_request("bad_study_id", "study_id must be 1-64 characters of [A-Za-z0-9._-]");
  }
  if (!request.study.ratings.empty() || !request.study.votes.empty()) {
    throw bad_request("bad_body", "a new study cannot carry ratings");
  }
  for (const auto& s : request.study.subjects) {
    if (!valid_identifier(s)) throw bad_request("bad_subject_id", "subject id '" + s + "' is not allowed");
  }
  Study study = request.study;
  study.metadata.annotators_per_sample = request.annotators_per_sample;
  study.canonicalize();
  if (auto v = validate_study(study); !v.empty()) throw bad_request("invalid_study", summarize(v));
  for (const auto& [video, _] : request.media_urls) {
    if (!std::ranges::any_of(study.videos, [&](const VideoRecord& r) { return r.video_id == video; })) {
      throw bad_request("unknown_video", "media_urls names unknown video '" + video + "'");
    }
  }

  std::vector<store::SessionAssignment> assignments;
  try {
    assignments = store::assign_sessions(study.videos, study.subjects, request.annotators_per_sample,
                                         request.sessions, request.seed);
  } catch (const InfeasibleError& e) {
    throw bad_request("infeasible", e.what());
  }
  for (auto& a : assignments) a.session_id = request.study_id + "." + a.session_id;

  std::lock_guard lock(mutex_);
  const auto dir = study_dir(request.study_id);
  if (studies_.contains(request.study_id) || std::filesystem::exists(dir)) {
    throw ServiceError(409, "study_exists", "study '" + request.study_id + "' already exists");
  }

  json sessions_doc = {{"study_id", request.study_id},
                       {"pretest", request.pretest},
                       {"media_urls", request.media_urls},
                       {"seed", request.seed},
                       {"annotators_per_sample", request.annotators_per_sample},
                       {"sessions", json::array()}};
  for (const auto& a : assignments) sessions_doc["sessions"].push_back(store::to_json(a));
  store::write_file_atomic(dir / "study.json", store::study_to_json(study).dump(2) + "\n");
  store::write_file_atomic(dir / "ratings.jsonl", "");
  // sessions.json marks the study as complete on disk, so it goes last.
  store::write_file_atomic(dir / "sessions.json", sessions_doc.dump(2) + "\n");

  StudyState& state = studies_[request.study_id];
  state.study = std::move(study);
  state.pretest = request.pretest;
  state.media_urls = request.media_urls;
  index(state);
  json out = {{"study_id", request.study_id}, {"pretest", request.pretest}, {"sessions", json::array()}};
  for (const auto& a : assignments) {
    sessions_[a.session_id] = {a.session_id, request.study_id, a.subject_id, a.video_ids, {}, 0, {}, {}};
    state.session_ids.push_back(a.session_id);
    out["sessions"].push_back(
        {{"session_id", a.session_id}, {"subject_id", a.subject_id}, {"videos", a.video_ids.size()}});
  }
  return out;
}

json AnnotationService::next_task(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  SessionState& session = session_locked(session_id);
  StudyState& state = studies_.at(session.study_id);
  if (session.opened_at.empty()) {
    const std::string at = clock_();
    append_journal(session.study_id, {{"type", "open"}, {"session_id", session_id}, {"at", at}});
    session.opened_at = at;
  }

  json out = {{"session_id", session_id},
              {"study_id", session.study_id},
              {"pretest", state.pretest},
              {"progress", progress_of(session)}};
  if (session.cursor >= session.video_ids.size()) {
    out["done"] = true;
    return out;
  }

  const PromptId& prompt_id = state.videos.at(session.video_ids[session.cursor])->prompt_id;
  json videos = json::array();
  for (std::size_t i = session.cursor; i < session.video_ids.size() && videos.size() < 3; ++i) {
    const VideoId& id = session.video_ids[i];
    if (state.videos.at(id)->prompt_id != prompt_id) break;
    if (session.completed.contains(id)) continue;
    auto url = state.media_urls.find(id);
    videos.push_back({{"video_id", id}, {"url", url == state.media_urls.end() ? json(nullptr) : json(url->second)}});
  }
  const PromptRecord& prompt = *state.prompts.at(prompt_id);
  out["done"] = false;
  out["prompt"] = {{"prompt_id", prompt.prompt_id},
                   {"text", prompt.text},
                   {"task", to_string(prompt.task)},
                   {"subtasks", prompt.subtasks}};
  out["videos"] = std::move(videos);
  out["dimensions"] = {"perception", "correspondence"};
  out["scale"] = {{"min", 1}, {"max", 5}};
  return out;
}

json AnnotationService::submit_rating(const std::string& session_id, const Submission& submission) {
  std::lock_guard lock(mutex_);
  SessionState& session = session_locked(session_id);
  StudyState& state = studies_.at(session.study_id);
  if (std::ranges::find(session.video_ids, submission.video_id) == session.video_ids.end()) {
    throw ServiceError(404, "unknown_video",
                       "video '" + submission.video_id + "' is not part of session '" + session_id + "'");
  }
  if (session.completed.contains(submission.video_id)) {
    throw ServiceError(409, "duplicate", "video '" + submission.video_id + "' was already rated in this session");
  }
  for (int score : {submission.perception, submission.correspondence}) {
    if (score < 1 || score > 5) throw bad_request("score_range", "scores must be in 1..5");
  }
  const auto& subtasks = state.prompts.at(state.videos.at(submission.video_id)->prompt_id)->subtasks;
  if (submission.votes.size() != subtasks.size()) {
    throw bad_request("votes_length", "expected " + std::to_string(subtasks.size()) + " vote(s), got " +
                                          std::to_string(submission.votes.size()));
  }

  const std::string at = clock_();
  append_journal(session.study_id, {{"type", "rating"},
                                    {"session_id", session_id},
                                    {"subject_id", session.subject_id},
                                    {"video_id", submission.video_id},
                                    {"perception", submission.perception},
                                    {"correspondence", submission.correspondence},
                                    {"votes", submission.votes},
                                    {"at", at}});
  apply_rating(state, session, submission);
  const bool done = session.completed.size() == session.video_ids.size();
  if (done) session.closed_at = at;
  return {{"accepted", true},
          {"session_id", session_id},
          {"video_id", submission.video_id},
          {"progress", progress_of(session)},
          {"done", done}};
}

std::pair<std::size_t, std::size_t> AnnotationService::progress(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  const SessionState& s = session_locked(session_id);
  return {s.completed.size(), s.video_ids.size()};
}

json AnnotationService::progress_json(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  const SessionState& s = session_locked(session_id);
  json out = progress_of(s);
  out["session_id"] = session_id;
  out["subject_id"] = s.subject_id;
  out["opened_at"] = s.opened_at.empty() ? json(nullptr) : json(s.opened_at);
  out["closed_at"] = s.closed_at.empty() ? json(nullptr) : json(s.closed_at);
  return out;
}

Study AnnotationService::export_study(const std::string& study_id) const {
  std::lock_guard lock(mutex_);
  auto it = studies_.find(study_id);
  if (it == studies_.end()) throw ServiceError(404, "unknown_study", "no study '" + study_id + "'");
  Study out = it->second.study;
  out.canonicalize();
  return out;
}

std::string AnnotationService::export_ratings(const std::string& study_id) const {
  return store::write_ratings_csv(export_study(study_id));
}

std::vector<std::string> AnnotationService::study_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : studies_) out.push_back(id);
  return out;
}

SessionState AnnotationService::session(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  return session_locked(session_id);
}

}  // namespace mosbench::server
