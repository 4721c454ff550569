#include "mosbench/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "mosbench/bench/evaluate.hpp"
#include "mosbench/bench/leaderboard.hpp"
#include "mosbench/bench/report.hpp"
#include "mosbench/core/errors.hpp"
#include "mosbench/prep/minipatch.hpp"
#include "mosbench/prep/quality.hpp"
#include "mosbench/prep/split.hpp"
#include "mosbench/server/http.hpp"
#include "mosbench/store/atomic_file.hpp"
#include "mosbench/store/csv.hpp"
#include "mosbench/store/outputs.hpp"
#include "mosbench/store/study_io.hpp"

namespace mosbench::cli {
namespace {

namespace fs = std::filesystem;

store::StudyFormat study_format(const RunConfig& config) {
  if (config.format == "csv") return store::StudyFormat::kCsv;
  if (config.format == "json") return store::StudyFormat::kJson;
  if (config.format != "auto") throw InputError("unknown study format '" + config.format + "'");
  return fs::is_directory(config.study) ? store::StudyFormat::kCsv : store::StudyFormat::kJson;
}

void require_path(const fs::path& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing required input: ") + what);
  if (!fs::exists(path)) throw InputError(std::string(what) + " not found: " + path.string());
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

// Video to model mapping for eval: a study directory, a study JSON file or a bare videos.csv.
std::vector<VideoRecord> read_videos(const fs::path& path) {
  if (fs::is_directory(path)) {
    auto in = open_input(path / "videos.csv");
    return store::read_videos_csv(in, (path / "videos.csv").string());
  }
  if (path.extension() == ".csv") {
    auto in = open_input(path);
    return store::read_videos_csv(in, path.string());
  }
  return store::load_study(path, store::StudyFormat::kJson).videos;
}

std::vector<PromptId> read_prompt_ids(const fs::path& path) {
  auto in = open_input(path);
  store::CsvReader reader(in, path.string());
  reader.read_header({"prompt_id"});
  std::vector<PromptId> out;
  while (auto row = reader.next()) out.push_back(reader.field(*row, "prompt_id"));
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ULL;
  std::uint64_t z = seed + h + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::optional<double> score_of(const MosRecord& r, const std::string& column) {
  if (column == "perception") return r.perception_mos;
  if (column == "correspondence") return r.correspondence_mos;
  if (column == "overall") return r.overall_avg;
  throw InputError("unknown score column '" + column + "'");
}

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }
}

int cmd_mos(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.study, "study");
  const Study study = store::load_study(config.study, study_format(config));
  const auto result = mos::compute_mos(study, config.pipeline);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  const auto cards = bench::build_scorecards(result.records, study);
  store::save_outputs(result.records, cards, config.out);
  store::write_file_atomic(config.out / "rejection_report.json", store::to_json(result.report).dump(2) + "\n");
  const auto board = bench::leaderboard(cards, bench::SortKey::kMeanRank);
  store::write_file_atomic(config.out / "leaderboard.md",
                           bench::leaderboard_markdown(board, study.metadata.name.empty() ? "Leaderboard"
                                                                                          : study.metadata.name));

  const auto complete = std::ranges::count_if(result.records, [](const MosRecord& r) { return r.complete(); });
  out << "videos: " << result.records.size() << " (" << complete << " with both scores)\n";
  for (auto dim : kDimensions) {
    out << "rejected subjects (" << to_string(dim) << "): " << result.report.rejected_subjects(dim).size() << "\n";
  }
  out << "wrote " << (config.out / "mos.json").string() << "\n";
  return kOk;
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.truth, "--truth");
  require_path(config.submission, "--submission");
  require_path(config.study, "--study");
  const auto truth = store::load_mos(config.truth);
  auto in = open_input(config.submission);
  const auto submission = bench::read_submission_csv(in, config.submission.string(), config.metric_name);
  Study study;
  study.videos = read_videos(config.study);

  std::set<VideoId> truth_ids;
  for (const auto& r : truth) truth_ids.insert(r.video_id);
  const auto covered = std::ranges::count_if(submission.entries, [&](const auto& e) { return truth_ids.contains(e.first); });
  if (covered < 2) {
    throw InputError("submission covers " + std::to_string(covered) + " ground-truth video(s), need at least 2");
  }
  std::set<ModelId> known;
  for (const auto& v : study.videos) known.insert(v.model_id);
  for (const auto& m : config.zero_shot_models) {
    if (!known.contains(m)) throw InputError("zero-shot model '" + m + "' has no videos");
  }

  bench::EvalOptions options;
  options.zero_shot_models = config.zero_shot_models;
  const auto report = bench::evaluate(submission, truth, study, options);
  for (const auto& n : report.notes) err << "note: " << n << "\n";
  store::write_file_atomic(config.out / "report.json", bench::to_json(report).dump(2) + "\n");
  store::write_file_atomic(config.out / "leaderboard.md", bench::comparison_markdown(report));

  auto line = [&](const char* label, const std::optional<bench::ModelStats>& s) {
    out << label << ": ";
    if (s) {
      out << "SRCC " << store::format_fixed(s->srcc, 4) << " RMSE " << store::format_fixed(s->rmse, 4) << "\n";
    } else {
      out << "n/a\n";
    }
  };
  line("model perception", report.model.scores.at(bench::ScoreColumn::kPerception));
  line("model correspondence", report.model.scores.at(bench::ScoreColumn::kCorrespondence));
  line("model qa", report.model.qa);
  line("model rank", report.model.rank);
  out << "wrote " << (config.out / "report.json").string() << "\n";
  return kOk;
}

int cmd_prep(const RunConfig& config, std::ostream& out, std::ostream&) {
  bool did_something = false;

  if (!config.prompts.empty() || !config.models.empty()) {
    require_path(config.prompts, "--prompts");
    require_path(config.models, "--models");
    auto models_in = open_input(config.models);
    const auto roster = prep::read_models_csv(models_in, config.models.string());
    prep::SplitRequest request{read_prompt_ids(config.prompts), roster.models, roster.train_models,
                               config.test_prompts, config.seed};
    const auto split = prep::split_dataset(request);
    store::write_file_atomic(config.out / "split.csv", prep::split_manifest_csv(split));
    out << "split: " << split.rows.size() << " rows (train " << split.train_rows << ", test " << split.test_rows
        << ")\n";
    did_something = true;
  }

  if (!config.mos.empty()) {
    require_path(config.mos, "--mos");
    const auto records = store::load_mos(config.mos);
    std::vector<std::pair<VideoId, double>> scores;
    for (const auto& r : records) {
      if (auto s = score_of(r, config.score)) scores.emplace_back(r.video_id, *s);
    }
    if (scores.empty()) throw InputError("no " + config.score + " scores in " + config.mos.string());
    const auto [lo, hi] = std::ranges::minmax(scores, {}, &std::pair<VideoId, double>::second);
    const double m = config.level_min.value_or(lo.second);
    const double M = config.level_max.value_or(hi.second);
    std::string csv = "video_id,score,level\n";
    std::map<prep::QualityLevel, int> counts;
    for (const auto& [video, s] : scores) {
      const auto level = prep::quality_level(s, m, M);
      ++counts[level];
      csv += store::csv_row({video, store::format_fixed(s, store::kScoreDigits), std::string(prep::to_string(level))});
    }
    store::write_file_atomic(config.out / "quality_levels.csv", csv);
    out << "quality levels:";
    for (const auto& [level, n] : counts) out << " " << prep::to_string(level) << "=" << n;
    out << "\n";
    did_something = true;
  }

  if (!config.frames.empty()) {
    require_path(config.frames, "--frames");
    std::vector<fs::path> dumps;
    for (const auto& e : fs::directory_iterator(config.frames)) {
      if (e.is_regular_file() && e.path().extension() == ".mbra") dumps.push_back(e.path());
    }
    std::ranges::sort(dumps);
    for (const auto& path : dumps) {
      const auto frames = prep::read_planar_u8(path);
      const std::string name = path.stem().string();
      const prep::FrameGridSpec spec{config.grid, config.patch, mix_seed(config.seed, name)};
      prep::write_planar(config.out / "minipatch" / (name + ".mbra"), prep::grid_minipatch(frames, spec));
    }
    out << "mini-patch maps: " << dumps.size() << "\n";
    did_something = true;
  }

  if (!did_something) throw InputError("prep needs --prompts/--models, --mos or --frames");
  return kOk;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_path(config.study, "study");
  try {
    const Study study = store::load_study(config.study, study_format(config));
    out << "ok: " << study.prompts.size() << " prompts, " << study.videos.size() << " videos, "
        << study.subjects.size() << " subjects, " << study.ratings.size() << " ratings\n";
    return kOk;
  } catch (const store::InvalidStudyError& e) {
    for (const auto& v : e.violations()) out << v.rule << "\t" << v.record << "\t" << v.message << "\n";
    err << e.violations().size() << " violation(s)\n";
    return kUsageError;
  }
}

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err,
              const std::function<void(int)>& on_listen) {
  server::AnnotationService service(config.data_dir);
  server::HttpServer http(service, {config.host, config.port, config.admin_token});
  const int port = http.bind();
  if (config.admin_token.empty()) err << "warning: no admin token set; POST /studies is disabled\n";
  out << "listening on " << config.host << ":" << port << "\n" << std::flush;

  g_stop = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    http.stop();
  });
  if (on_listen) on_listen(port);
  http.listen();
  g_stop = true;
  watcher.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  return kOk;
}

}  // namespace mosbench::cli
