#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "mosbench/cli/commands.hpp"

namespace mosbench::cli {
namespace {

void add_study_options(CLI::App& sub, std::string& study, RunConfig& config) {
  sub.add_option("--study", study, "Study directory (CSV) or JSON file")->required();
  sub.add_option("--format", config.format, "Study format")->check(CLI::IsMember({"auto", "csv", "json"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string out_dir = ".", study, truth, submission, prompts, models, mos_path, frames, data_dir = config.data_dir;
  std::string degenerate = "exclude";

  CLI::App app{"Subjective video quality toolkit: MOS, benchmark evaluation, data prep, annotation server"};
  app.name("mosbench");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style config file; command-line flags take precedence");
  app.add_option("--seed", config.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  auto* mos = app.add_subcommand("mos", "Compute MOS, QA answers and the rejection report");
  add_study_options(*mos, study, config);
  mos->add_option("--degenerate-sigma", degenerate, "Subjects whose ratings have no spread")
      ->check(CLI::IsMember({"exclude", "midpoint"}))
      ->capture_default_str();
  mos->add_flag("--drop-rejected-votes", config.pipeline.drop_rejected_votes,
                "Drop QA votes of rejected correspondence subjects and scores");

  auto* eval = app.add_subcommand("eval", "Compare a metric's predictions with ground truth");
  eval->add_option("--study", study, "Study directory, study JSON or videos.csv (video to model mapping)")
      ->required();
  eval->add_option("--truth", truth, "mos.json from the mos command")->required();
  eval->add_option("--submission", submission, "CSV: video_id and any of perception, correspondence, overall, qa")
      ->required();
  eval->add_option("--metric-name", config.metric_name, "Name shown in the report")->capture_default_str();
  eval->add_option("--zero-shot", config.zero_shot_models, "Models of the zero-shot subset")->delimiter(',');

  auto* prep = app.add_subcommand("prep", "Train/test split, quality levels and mini-patch maps");
  prep->add_option("--prompts", prompts, "CSV with a prompt_id column");
  prep->add_option("--models", models, "CSV: model_id,role (train|test)");
  prep->add_option("--test-prompts", config.test_prompts, "Number of test prompts");
  prep->add_option("--mos", mos_path, "mos.json to discretize into quality levels");
  prep->add_option("--score", config.score, "Score column for quality levels")
      ->check(CLI::IsMember({"perception", "correspondence", "overall"}))
      ->capture_default_str();
  prep->add_option("--min", config.level_min, "Lower end of the score range (default: observed minimum)");
  prep->add_option("--max", config.level_max, "Upper end of the score range (default: observed maximum)");
  prep->add_option("--frames", frames, "Directory of planar frame dumps (*.mbra)");
  prep->add_option("--grid", config.grid, "Grid cells per side")->capture_default_str();
  prep->add_option("--patch", config.patch, "Mini-patch side in pixels")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Run the annotation HTTP server");
  serve->add_option("--data-dir", data_dir, "Where studies and ratings are kept")->capture_default_str();
  serve->add_option("--host", config.host)->capture_default_str();
  serve->add_option("--port", config.port)->capture_default_str();
  serve->add_option("--admin-token", config.admin_token,
                    "Token for POST /studies (default: $MOSBENCH_ADMIN_TOKEN)");

  auto* validate = app.add_subcommand("validate", "Check a study against every invariant");
  add_study_options(*validate, study, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << "run 'mosbench --help' for usage\n";
    return kUsageError;
  }

  config.out = out_dir;
  config.study = study;
  config.truth = truth;
  config.submission = submission;
  config.prompts = prompts;
  config.models = models;
  config.mos = mos_path;
  config.frames = frames;
  config.data_dir = data_dir;
  config.pipeline.degenerate_sigma =
      degenerate == "midpoint" ? mos::DegenerateSigmaPolicy::kMidpoint : mos::DegenerateSigmaPolicy::kExclude;
  if (config.admin_token.empty()) {
    if (const char* token = std::getenv("MOSBENCH_ADMIN_TOKEN")) config.admin_token = token;
  }

  return guarded(err, [&] {
    if (mos->parsed()) return cmd_mos(config, out, err);
    if (eval->parsed()) return cmd_eval(config, out, err);
    if (prep->parsed()) return cmd_prep(config, out, err);
    if (serve->parsed()) return cmd_serve(config, out, err);
    return cmd_validate(config, out, err);
  });
}

}  // namespace mosbench::cli
