#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mosbench/mos/pipeline.hpp"

namespace mosbench::cli {

/// Stable process exit codes.
enum ExitCode : int { kOk = 0, kComputationError = 1, kUsageError = 2 };

struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";

  // mos, validate, eval
  std::filesystem::path study;
  std::string format = "auto";  // auto | csv | json
  mos::PipelineOptions pipeline;

  // eval
  std::filesystem::path truth;       // mos.json
  std::filesystem::path submission;  // video_id,perception,correspondence[,overall][,qa]
  std::string metric_name = "metric";
  std::vector<std::string> zero_shot_models;

  // prep
  std::filesystem::path prompts;  // any CSV with a prompt_id column
  std::filesystem::path models;   // model_id,role
  std::size_t test_prompts = 0;
  std::filesystem::path mos;      // mos.json for quality levels
  std::string score = "overall";  // perception | correspondence | overall
  std::optional<double> level_min, level_max;
  std::filesystem::path frames;   // directory of planar frame dumps
  int grid = 7;
  int patch = 32;

  // serve
  std::filesystem::path data_dir = "annotation-data";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string admin_token;
};

int cmd_mos(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_prep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Blocks until the server stops. `on_listen` receives the bound port.
int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err,
              const std::function<void(int)>& on_listen = {});

/// Runs `body`, mapping InputError to kUsageError and every other failure to
/// kComputationError, with the message on `err`.
int guarded(std::ostream& err, const std::function<int()>& body);

/// Parses argv and dispatches. Exposed for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mosbench::cli
