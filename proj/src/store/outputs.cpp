#include "mosbench/store/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mosbench/core/errors.hpp"
#include "mosbench/store/atomic_file.hpp"
#include "mosbench/store/csv.hpp"

namespace mosbench::store {
namespace {

using nlohmann::json;

json score(const std::optional<double>& v) {
  return v ? json(round_to(*v, kScoreDigits)) : json(nullptr);
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ParseError(source, 0, key, "expected a number or null");
  return j.at(key).get<double>();
}

}  // namespace

double round_to(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no "-0.0" in outputs
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, round_to(value, digits));
  return buf;
}

json to_json(const MosRecord& r) {
  return {{"video_id", r.video_id},
          {"perception_mos", score(r.perception_mos)},
          {"correspondence_mos", score(r.correspondence_mos)},
          {"overall_avg", score(r.overall_avg)},
          {"qa_answer", r.qa_answer ? json(*r.qa_answer) : json(nullptr)},
          {"contributing_counts",
           {{"perception", r.contributing_counts[0]}, {"correspondence", r.contributing_counts[1]}}},
          {"complete", r.complete()}};
}

json to_json(const ModelScorecard& s) {
  json per_task = json::object();
  for (const auto& [task, agg] : s.per_task) {
    per_task[std::string(to_string(task))] = {{"mean_perception", score(agg.mean_perception)},
                                              {"mean_correspondence", score(agg.mean_correspondence)},
                                              {"qa_accuracy", score(agg.qa_accuracy)},
                                              {"videos", agg.videos}};
  }
  return {{"model_id", s.model_id},
          {"mean_perception", score(s.mean_perception)},
          {"mean_correspondence", score(s.mean_correspondence)},
          {"mean_overall", score(s.mean_overall())},
          {"qa_accuracy", score(s.qa_accuracy)},
          {"videos", s.videos},
          {"rank", s.rank},
          {"per_task", per_task}};
}

json to_json(const mos::RejectionReport& report) {
  json dims = json::array();
  for (const auto& d : report.dimensions) {
    json subjects = json::array();
    for (const auto& s : d.subjects) {
      subjects.push_back(
          {{"subject_id", s.subject_id}, {"p", s.p}, {"q", s.q}, {"n", s.n}, {"rejected", s.rejected}});
    }
    json scores = json::array();
    for (const auto& r : d.rejected_scores) {
      scores.push_back({{"subject_id", r.subject_id}, {"video_id", r.video_id}, {"raw_score", r.raw_score}});
    }
    dims.push_back({{"dimension", std::string(to_string(d.dimension))},
                    {"subjects", subjects},
                    {"rejected_subjects", report.rejected_subjects(d.dimension)},
                    {"rejected_scores", scores},
                    {"empty_items", d.empty_items},
                    {"degenerate_subjects", d.degenerate_subjects}});
  }
  return {{"dimensions", dims}, {"qa_ties", report.qa_ties}};
}

MosRecord mos_from_json(const json& j, const std::string& source) {
  if (!j.is_object() || !j.contains("video_id") || !j.at("video_id").is_string()) {
    throw ParseError(source, 0, "video_id", "missing or not a string");
  }
  MosRecord r;
  r.video_id = j.at("video_id").get<std::string>();
  r.perception_mos = optional_number(j, "perception_mos", source);
  r.correspondence_mos = optional_number(j, "correspondence_mos", source);
  r.overall_avg = optional_number(j, "overall_avg", source);
  if (j.contains("qa_answer") && !j.at("qa_answer").is_null()) {
    if (!j.at("qa_answer").is_boolean()) throw ParseError(source, 0, "qa_answer", "expected a boolean");
    r.qa_answer = j.at("qa_answer").get<bool>();
  }
  if (j.contains("contributing_counts")) {
    const auto& c = j.at("contributing_counts");
    r.contributing_counts = {c.value("perception", 0), c.value("correspondence", 0)};
  }
  return r;
}

std::string mos_csv(const std::vector<MosRecord>& input) {
  auto mos = input;
  std::ranges::sort(mos, {}, &MosRecord::video_id);
  auto cell = [](const std::optional<double>& v) { return v ? format_fixed(*v, kScoreDigits) : std::string(); };
  std::string out = "video_id,perception_mos,correspondence_mos,overall_avg,qa_answer\n";
  for (const auto& r : mos) {
    out += csv_row({r.video_id, cell(r.perception_mos), cell(r.correspondence_mos), cell(r.overall_avg),
                    r.qa_answer ? (*r.qa_answer ? "1" : "0") : ""});
  }
  return out;
}

void save_outputs(const std::vector<MosRecord>& input_mos,
                  const std::vector<ModelScorecard>& input_cards, const std::filesystem::path& dir) {
  auto mos = input_mos;
  std::ranges::sort(mos, {}, &MosRecord::video_id);
  auto cards = input_cards;
  std::ranges::sort(cards, {}, &ModelScorecard::model_id);

  json mos_doc = json::array();
  for (const auto& r : mos) mos_doc.push_back(to_json(r));
  json card_doc = json::array();
  for (const auto& s : cards) card_doc.push_back(to_json(s));

  write_file_atomic(dir / "mos.json", mos_doc.dump(2) + "\n");
  write_file_atomic(dir / "mos.csv", mos_csv(mos));
  write_file_atomic(dir / "scorecards.json", card_doc.dump(2) + "\n");
}

std::vector<MosRecord> load_mos(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, "*", e.what());
  }
  if (!doc.is_array()) throw SchemaError(path.string() + ": expected a JSON array of MOS records");
  std::vector<MosRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(mos_from_json(doc[i], path.string() + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace mosbench::store
