#include "mosbench/store/study_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "mosbench/store/atomic_file.hpp"
#include "mosbench/store/csv.hpp"

namespace mosbench::store {
namespace {

using nlohmann::json;

std::vector<std::string> split_descriptors(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto bar = text.find('|', start);
    out.push_back(text.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

std::vector<bool> parse_votes(const std::string& text, const CsvReader& reader) {
  std::vector<bool> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ParseError(reader.source(), reader.line(), "votes",
                       "expected a string of 0/1 characters, got '" + text + "'");
    }
    out.push_back(c == '1');
  }
  return out;
}

std::string votes_string(const std::vector<bool>& votes) {
  std::string out;
  for (bool v : votes) out.push_back(v ? '1' : '0');
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

// JSON field access with the record position in the message.
const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where, 0, key, "missing field");
  }
  return j.at(key);
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError(where, 0, key, "expected a string");
}

long long int_field(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where, 0, key, "expected an integer");
  return v.get<long long>();
}

Study finish(Study study) {
  study.canonicalize();
  auto violations = validate_study(study);
  if (!violations.empty()) throw InvalidStudyError(std::move(violations));
  return study;
}

}  // namespace

std::vector<PromptRecord> read_prompts_csv(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  reader.read_header({"prompt_id", "task", "text", "subtask_count", "subtask_descriptors"});
  std::vector<PromptRecord> out;
  while (auto row = reader.next()) {
    PromptRecord p;
    p.prompt_id = reader.field(*row, "prompt_id");
    p.text = reader.field(*row, "text");
    const auto& task = reader.field(*row, "task");
    auto parsed = parse_task(task);
    if (!parsed) throw ParseError(source, reader.line(), "task", "unknown task '" + task + "'");
    p.task = *parsed;
    const long long count = reader.integer(*row, "subtask_count");
    const auto& descriptors = reader.field(*row, "subtask_descriptors");
    if (!descriptors.empty()) p.subtasks = split_descriptors(descriptors);
    if (count != static_cast<long long>(p.subtasks.size())) {
      throw ParseError(source, reader.line(), "subtask_count",
                       "says " + std::to_string(count) + " but " +
                           std::to_string(p.subtasks.size()) + " descriptor(s) given");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<VideoRecord> read_videos_csv(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  reader.read_header({"video_id", "prompt_id", "model_id", "split"});
  std::vector<VideoRecord> out;
  while (auto row = reader.next()) {
    VideoRecord v;
    v.video_id = reader.field(*row, "video_id");
    v.prompt_id = reader.field(*row, "prompt_id");
    v.model_id = reader.field(*row, "model_id");
    const auto& split = reader.field(*row, "split");
    auto parsed = parse_split(split);
    if (!parsed) throw ParseError(source, reader.line(), "split", "expected train|test, got '" + split + "'");
    v.split = *parsed;
    out.push_back(std::move(v));
  }
  return out;
}

void read_ratings_csv(std::istream& in, const std::string& source, Study& study) {
  CsvReader reader(in, source);
  reader.read_header({"subject_id", "video_id", "dimension", "raw_score", "votes"});
  std::map<std::pair<SubjectId, VideoId>, std::vector<bool>> votes;
  while (auto row = reader.next()) {
    RatingRecord r;
    r.subject_id = reader.field(*row, "subject_id");
    r.video_id = reader.field(*row, "video_id");
    const auto& dim = reader.field(*row, "dimension");
    auto parsed = parse_dimension(dim);
    if (!parsed) {
      throw ParseError(source, reader.line(), "dimension",
                       "expected perception|correspondence, got '" + dim + "'");
    }
    r.dimension = *parsed;
    const long long score = reader.integer(*row, "raw_score");
    if (score < INT32_MIN || score > INT32_MAX) {
      throw ParseError(source, reader.line(), "raw_score", "out of integer range");
    }
    r.raw_score = static_cast<int>(score);

    const auto& vote_text = reader.field(*row, "votes");
    if (!vote_text.empty()) {
      auto parsed_votes = parse_votes(vote_text, reader);
      auto [it, inserted] = votes.emplace(std::pair{r.subject_id, r.video_id}, parsed_votes);
      if (!inserted && it->second != parsed_votes) {
        throw ParseError(source, reader.line(), "votes",
                         "conflicts with votes given on the other dimension row");
      }
    }
    study.ratings.push_back(std::move(r));
  }
  for (auto& [key, v] : votes) study.votes.push_back({key.first, key.second, std::move(v)});
}

std::string write_prompts_csv(const std::vector<PromptRecord>& prompts) {
  std::string out = "prompt_id,task,text,subtask_count,subtask_descriptors\n";
  for (const auto& p : prompts) {
    std::string joined;
    for (std::size_t i = 0; i < p.subtasks.size(); ++i) {
      if (p.subtasks[i].find('|') != std::string::npos) {
        throw InputError("prompt '" + p.prompt_id + "': subtask descriptor contains '|'");
      }
      if (i) joined.push_back('|');
      joined += p.subtasks[i];
    }
    out += csv_row({p.prompt_id, std::string(to_string(p.task)), p.text,
                    std::to_string(p.subtasks.size()), joined});
  }
  return out;
}

std::string write_videos_csv(const std::vector<VideoRecord>& videos) {
  std::string out = "video_id,prompt_id,model_id,split\n";
  for (const auto& v : videos) {
    out += csv_row({v.video_id, v.prompt_id, v.model_id, std::string(to_string(v.split))});
  }
  return out;
}

std::string write_ratings_csv(const Study& study) {
  Study sorted;
  sorted.ratings = study.ratings;
  sorted.votes = study.votes;
  sorted.canonicalize();

  std::map<std::pair<SubjectId, VideoId>, const std::vector<bool>*> votes;
  for (const auto& v : sorted.votes) votes.emplace(std::pair{v.subject_id, v.video_id}, &v.votes);
  std::map<std::pair<SubjectId, VideoId>, Dimension> vote_row;
  for (const auto& r : sorted.ratings) {
    auto key = std::pair{r.subject_id, r.video_id};
    auto [it, inserted] = vote_row.emplace(key, r.dimension);
    if (!inserted && r.dimension == Dimension::kPerception) it->second = r.dimension;
  }

  std::string out = "subject_id,video_id,dimension,raw_score,votes\n";
  for (const auto& r : sorted.ratings) {
    auto key = std::pair{r.subject_id, r.video_id};
    std::string vote_text;
    if (auto it = votes.find(key); it != votes.end() && vote_row.at(key) == r.dimension) {
      vote_text = votes_string(*it->second);
    }
    out += csv_row({r.subject_id, r.video_id, std::string(to_string(r.dimension)),
                    std::to_string(r.raw_score), vote_text});
  }
  return out;
}

json to_json(const PromptRecord& p) {
  return {{"prompt_id", p.prompt_id},
          {"task", std::string(to_string(p.task))},
          {"text", p.text},
          {"subtasks", p.subtasks}};
}

json to_json(const VideoRecord& v) {
  return {{"video_id", v.video_id},
          {"prompt_id", v.prompt_id},
          {"model_id", v.model_id},
          {"split", std::string(to_string(v.split))}};
}

PromptRecord prompt_from_json(const json& j, const std::string& where) {
  PromptRecord p;
  p.prompt_id = string_field(j, "prompt_id", where);
  p.text = string_field(j, "text", where);
  const auto task = string_field(j, "task", where);
  auto parsed = parse_task(task);
  if (!parsed) throw ParseError(where, 0, "task", "unknown task '" + task + "'");
  p.task = *parsed;
  const json& subtasks = member(j, "subtasks", where);
  if (!subtasks.is_array()) throw ParseError(where, 0, "subtasks", "expected an array");
  for (const auto& s : subtasks) {
    if (!s.is_string()) throw ParseError(where, 0, "subtasks", "expected strings");
    p.subtasks.push_back(s.get<std::string>());
  }
  return p;
}

VideoRecord video_from_json(const json& j, const std::string& where) {
  VideoRecord v;
  v.video_id = string_field(j, "video_id", where);
  v.prompt_id = string_field(j, "prompt_id", where);
  v.model_id = string_field(j, "model_id", where);
  const auto split = j.contains("split") ? string_field(j, "split", where) : std::string("test");
  auto parsed = parse_split(split);
  if (!parsed) throw ParseError(where, 0, "split", "expected train|test, got '" + split + "'");
  v.split = *parsed;
  return v;
}

json study_to_json(const Study& input) {
  Study study = input;
  study.canonicalize();
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["metadata"] = {{"name", study.metadata.name},
                     {"annotators_per_sample", study.metadata.annotators_per_sample}};
  doc["prompts"] = json::array();
  for (const auto& p : study.prompts) doc["prompts"].push_back(to_json(p));
  doc["videos"] = json::array();
  for (const auto& v : study.videos) doc["videos"].push_back(to_json(v));
  doc["subjects"] = study.subjects;
  doc["ratings"] = json::array();
  for (const auto& r : study.ratings) {
    doc["ratings"].push_back({{"subject_id", r.subject_id},
                              {"video_id", r.video_id},
                              {"dimension", std::string(to_string(r.dimension))},
                              {"raw_score", r.raw_score}});
  }
  doc["votes"] = json::array();
  for (const auto& v : study.votes) {
    doc["votes"].push_back({{"subject_id", v.subject_id}, {"video_id", v.video_id}, {"votes", v.votes}});
  }
  return doc;
}

Study study_from_json(const json& doc, const std::string& source) {
  if (!doc.is_object()) throw SchemaError(source + ": expected a JSON object");
  const long long version = int_field(doc, "schema_version", source);
  if (version != kSchemaVersion) {
    throw SchemaError(source + ": schema_version " + std::to_string(version) + " not supported (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  Study study;
  if (doc.contains("metadata")) {
    const json& meta = doc.at("metadata");
    if (meta.contains("name")) study.metadata.name = string_field(meta, "name", source + ":metadata");
    if (meta.contains("annotators_per_sample")) {
      study.metadata.annotators_per_sample =
          static_cast<int>(int_field(meta, "annotators_per_sample", source + ":metadata"));
    }
  }
  auto array = [&](const char* key) -> const json& {
    const json& a = member(doc, key, source);
    if (!a.is_array()) throw ParseError(source, 0, key, "expected an array");
    return a;
  };
  auto where = [&](const char* key, std::size_t i) {
    return source + ":" + key + "[" + std::to_string(i) + "]";
  };

  const json& prompts = array("prompts");
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    study.prompts.push_back(prompt_from_json(prompts[i], where("prompts", i)));
  }
  const json& videos = array("videos");
  for (std::size_t i = 0; i < videos.size(); ++i) {
    study.videos.push_back(video_from_json(videos[i], where("videos", i)));
  }
  const json& ratings = array("ratings");
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    const std::string w = where("ratings", i);
    RatingRecord r;
    r.subject_id = string_field(ratings[i], "subject_id", w);
    r.video_id = string_field(ratings[i], "video_id", w);
    const auto dim = string_field(ratings[i], "dimension", w);
    auto parsed = parse_dimension(dim);
    if (!parsed) throw ParseError(w, 0, "dimension", "expected perception|correspondence, got '" + dim + "'");
    r.dimension = *parsed;
    r.raw_score = static_cast<int>(int_field(ratings[i], "raw_score", w));
    study.ratings.push_back(std::move(r));
  }
  if (doc.contains("votes")) {
    const json& votes = array("votes");
    for (std::size_t i = 0; i < votes.size(); ++i) {
      const std::string w = where("votes", i);
      VoteRecord v;
      v.subject_id = string_field(votes[i], "subject_id", w);
      v.video_id = string_field(votes[i], "video_id", w);
      const json& list = member(votes[i], "votes", w);
      if (!list.is_array()) throw ParseError(w, 0, "votes", "expected an array of booleans");
      for (const auto& b : list) {
        if (b.is_boolean()) {
          v.votes.push_back(b.get<bool>());
        } else if (b.is_number_integer() && (b.get<int>() == 0 || b.get<int>() == 1)) {
          v.votes.push_back(b.get<int>() == 1);
        } else {
          throw ParseError(w, 0, "votes", "expected booleans");
        }
      }
      study.votes.push_back(std::move(v));
    }
  }
  if (doc.contains("subjects")) {
    for (const auto& s : array("subjects")) {
      if (!s.is_string()) throw ParseError(source, 0, "subjects", "expected strings");
      study.subjects.push_back(s.get<std::string>());
    }
  } else {
    for (const auto& r : study.ratings) study.subjects.push_back(r.subject_id);
  }
  return study;
}

Study load_study(const std::filesystem::path& path, StudyFormat format) {
  if (format == StudyFormat::kJson) {
    const std::string text = read_file(path);
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string(), 0, "*", e.what());
    }
    return finish(study_from_json(doc, path.string()));
  }

  if (!std::filesystem::is_directory(path)) {
    throw InputError("study directory not found: " + path.string());
  }
  Study study;
  study.metadata.name = path.filename().string();
  if (std::filesystem::exists(path / "meta.csv")) {
    auto in = open_input(path / "meta.csv");
    CsvReader reader(in, (path / "meta.csv").string());
    reader.read_header({"key", "value"});
    while (auto row = reader.next()) {
      const auto& key = reader.field(*row, "key");
      if (key == "schema_version") {
        const long long v = reader.integer(*row, "value");
        if (v != kSchemaVersion) {
          throw SchemaError(reader.source() + ": schema_version " + std::to_string(v) +
                            " not supported (expected " + std::to_string(kSchemaVersion) + ")");
        }
      } else if (key == "name") {
        study.metadata.name = reader.field(*row, "value");
      } else if (key == "annotators_per_sample") {
        study.metadata.annotators_per_sample = static_cast<int>(reader.integer(*row, "value"));
      }
    }
  }
  {
    auto in = open_input(path / "prompts.csv");
    study.prompts = read_prompts_csv(in, (path / "prompts.csv").string());
  }
  {
    auto in = open_input(path / "videos.csv");
    study.videos = read_videos_csv(in, (path / "videos.csv").string());
  }
  {
    auto in = open_input(path / "ratings.csv");
    read_ratings_csv(in, (path / "ratings.csv").string(), study);
  }
  if (std::filesystem::exists(path / "subjects.csv")) {
    auto in = open_input(path / "subjects.csv");
    CsvReader reader(in, (path / "subjects.csv").string());
    reader.read_header({"subject_id"});
    while (auto row = reader.next()) study.subjects.push_back(reader.field(*row, "subject_id"));
  } else {
    for (const auto& r : study.ratings) study.subjects.push_back(r.subject_id);
  }
  return finish(std::move(study));
}

void save_study(const Study& input, const std::filesystem::path& path, StudyFormat format) {
  Study study = input;
  study.canonicalize();
  if (format == StudyFormat::kJson) {
    write_file_atomic(path, study_to_json(study).dump(2) + "\n");
    return;
  }
  std::string meta = "key,value\n";
  meta += csv_row({"schema_version", std::to_string(kSchemaVersion)});
  meta += csv_row({"name", study.metadata.name});
  meta += csv_row({"annotators_per_sample", std::to_string(study.metadata.annotators_per_sample)});
  write_file_atomic(path / "meta.csv", meta);
  write_file_atomic(path / "prompts.csv", write_prompts_csv(study.prompts));
  write_file_atomic(path / "videos.csv", write_videos_csv(study.videos));
  write_file_atomic(path / "ratings.csv", write_ratings_csv(study));
  std::string subjects = "subject_id\n";
  for (const auto& s : study.subjects) subjects += csv_row({s});
  write_file_atomic(path / "subjects.csv", subjects);
}

}  // namespace mosbench::store
