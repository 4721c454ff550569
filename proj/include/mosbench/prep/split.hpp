#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mosbench/core/types.hpp"

namespace mosbench::prep {

struct SplitRow {
  PromptId prompt_id;
  ModelId model_id;
  Split split = Split::kTrain;

  friend bool operator==(const SplitRow&, const SplitRow&) = default;
};

struct SplitRequest {
  std::vector<PromptId> prompts;
  std::vector<ModelId> models;
  std::vector<ModelId> train_models;  // subset of models
  std::size_t test_prompt_count = 0;
  std::uint64_t seed = 0;
};

struct SplitResult {
  std::vector<SplitRow> rows;  // sorted by (prompt_id, model_id)
  std::vector<PromptId> test_prompts;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

/// Test prompts are a seeded sample of the prompt list; every test prompt is paired
/// with every model and every other prompt with every train model. Throws InputError
/// on duplicate ids and InfeasibleError when the counts cannot be met.
SplitResult split_dataset(const SplitRequest& request);

/// prompt_id,model_id,split
std::string split_manifest_csv(const SplitResult& result);

/// models.csv: model_id,role with role train (train and test) or test (test only).
struct ModelRoster {
  std::vector<ModelId> models;
  std::vector<ModelId> train_models;
};
ModelRoster read_models_csv(std::istream& in, const std::string& source);

}  // namespace mosbench::prep
