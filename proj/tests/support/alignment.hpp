#pragma once

// The 30-model human / "Ours" table, expanded into a synthetic study so it can go
// through bench::evaluate like any other submission.

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "mosbench/bench/evaluate.hpp"
#include "mosbench/core/errors.hpp"
#include "mosbench/store/csv.hpp"
#include "support/test_support.hpp"

namespace testing_support {

struct AlignmentRow {
  std::string model;
  bool zero_shot = false;
  double human_p = 0, ours_p = 0, human_c = 0, ours_c = 0, human_qa = 0, ours_qa = 0;
  int human_rank = 0, ours_rank = 0;
};

inline std::vector<AlignmentRow> load_alignment_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mosbench::InputError("cannot open " + path);
  mosbench::store::CsvReader reader(in, path);
  reader.read_header({"model", "zero_shot", "human_p", "ours_p", "human_c", "ours_c", "human_qa",
                      "ours_qa", "human_rank", "ours_rank"});
  std::vector<AlignmentRow> rows;
  while (auto r = reader.next()) {
    auto num = [&](const char* name) { return std::stod(reader.field(*r, name)); };
    rows.push_back({reader.field(*r, "model"), reader.field(*r, "zero_shot") == "1", num("human_p"),
                    num("ours_p"), num("human_c"), num("ours_c"), num("human_qa"), num("ours_qa"),
                    static_cast<int>(reader.integer(*r, "human_rank")),
                    static_cast<int>(reader.integer(*r, "ours_rank"))});
  }
  return rows;
}

struct AlignmentFixture {
  mosbench::Study study;
  std::vector<mosbench::MosRecord> truth;
  mosbench::bench::MetricSubmission submission;
  std::vector<mosbench::ModelId> zero_shot_models;
};

/// `videos_per_model` test videos per model, one per prompt. Every video of a model
/// carries the model's table value, so per-model means reproduce the table. QA is
/// expanded to round(accuracy * videos / 100) correct answers.
inline AlignmentFixture expand_alignment_table(const std::vector<AlignmentRow>& rows,
                                               int videos_per_model = 300) {
  using namespace mosbench;
  AlignmentFixture f;
  f.submission.metric_name = "Ours";
  for (int p = 0; p < videos_per_model; ++p) {
    f.study.prompts.push_back({"p" + pad(p, 3), "prompt", Task::kObject, {"subject"}});
  }
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const auto& row = rows[m];
    if (row.zero_shot) f.zero_shot_models.push_back(row.model);
    const int human_yes = static_cast<int>(std::lround(row.human_qa * videos_per_model / 100.0));
    const int ours_yes = static_cast<int>(std::lround(row.ours_qa * videos_per_model / 100.0));
    for (int p = 0; p < videos_per_model; ++p) {
      const VideoId id = "m" + pad(static_cast<int>(m)) + "-p" + pad(p, 3);
      f.study.videos.push_back({id, "p" + pad(p, 3), row.model, Split::kTest});
      MosRecord r;
      r.video_id = id;
      r.perception_mos = row.human_p;
      r.correspondence_mos = row.human_c;
      r.overall_avg = (row.human_p + row.human_c) / 2.0;
      r.qa_answer = p < human_yes;
      f.truth.push_back(r);
      f.submission.entries[id] = {row.ours_p, row.ours_c, std::nullopt, p < ours_yes};
    }
  }
  f.study.canonicalize();
  return f;
}

}  // namespace testing_support
