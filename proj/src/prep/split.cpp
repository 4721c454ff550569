#include "mosbench/prep/split.hpp"

#include <algorithm>
#include <set>

#include "mosbench/core/errors.hpp"
#include "mosbench/core/random.hpp"
#include "mosbench/store/csv.hpp"

namespace mosbench::prep {
namespace {

std::vector<std::string> sorted_unique(const std::vector<std::string>& ids, const char* what) {
  std::vector<std::string> out = ids;
  std::ranges::sort(out);
  if (auto dup = std::ranges::adjacent_find(out); dup != out.end()) {
    throw InputError(std::string("split_dataset: duplicate ") + what + " '" + *dup + "'");
  }
  return out;
}

}  // namespace

SplitResult split_dataset(const SplitRequest& request) {
  auto prompts = sorted_unique(request.prompts, "prompt");
  const auto models = sorted_unique(request.models, "model");
  const auto train_models = sorted_unique(request.train_models, "train model");
  for (const auto& m : train_models) {
    if (!std::ranges::binary_search(models, m)) {
      throw InfeasibleError("split_dataset: train model '" + m + "' is not in the model list");
    }
  }
  if (request.test_prompt_count > prompts.size()) {
    throw InfeasibleError("split_dataset: " + std::to_string(request.test_prompt_count) +
                          " test prompts requested from " + std::to_string(prompts.size()));
  }

  // Shuffle the sorted list so the sample does not depend on input order.
  std::vector<PromptId> shuffled = prompts;
  Rng rng(request.seed);
  rng.shuffle(std::span<PromptId>(shuffled));
  const std::set<PromptId> test(shuffled.begin(),
                                shuffled.begin() + static_cast<std::ptrdiff_t>(request.test_prompt_count));

  SplitResult out;
  out.test_prompts.assign(test.begin(), test.end());
  for (const auto& p : prompts) {
    const bool is_test = test.contains(p);
    for (const auto& m : is_test ? models : train_models) {
      out.rows.push_back({p, m, is_test ? Split::kTest : Split::kTrain});
    }
    (is_test ? out.test_rows : out.train_rows) += is_test ? models.size() : train_models.size();
  }
  return out;
}

std::string split_manifest_csv(const SplitResult& result) {
  std::string out = "prompt_id,model_id,split\n";
  for (const auto& r : result.rows) {
    out += store::csv_row({r.prompt_id, r.model_id, std::string(to_string(r.split))});
  }
  return out;
}

ModelRoster read_models_csv(std::istream& in, const std::string& source) {
  store::CsvReader reader(in, source);
  reader.read_header({"model_id", "role"});
  ModelRoster out;
  std::set<ModelId> seen;
  while (auto row = reader.next()) {
    const auto& id = reader.field(*row, "model_id");
    const auto& role = reader.field(*row, "role");
    if (id.empty()) throw ParseError(source, reader.line(), "model_id", "empty id");
    if (!seen.insert(id).second) throw ParseError(source, reader.line(), "model_id", "duplicate '" + id + "'");
    if (role == "train") {
      out.train_models.push_back(id);
    } else if (role != "test") {
      throw ParseError(source, reader.line(), "role", "expected train or test, got '" + role + "'");
    }
    out.models.push_back(id);
  }
  return out;
}

}  // namespace mosbench::prep
