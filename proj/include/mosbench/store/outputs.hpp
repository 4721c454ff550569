#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mosbench/core/types.hpp"
#include "mosbench/mos/pipeline.hpp"

namespace mosbench::store {

/// Scores in processed outputs are rounded to this many fractional digits.
inline constexpr int kScoreDigits = 4;
/// Human-readable table exports use this many.
inline constexpr int kTableDigits = 2;

double round_to(double value, int digits);
/// Fixed-point text, e.g. format_fixed(61.78511, 4) == "61.7851".
std::string format_fixed(double value, int digits);

nlohmann::json to_json(const MosRecord& r);
nlohmann::json to_json(const ModelScorecard& s);
nlohmann::json to_json(const mos::RejectionReport& report);

MosRecord mos_from_json(const nlohmann::json& j, const std::string& source);

/// Writes mos.json, mos.csv and scorecards.json under `dir`, sorted by id.
/// Identical input gives byte-identical files.
void save_outputs(const std::vector<MosRecord>& mos, const std::vector<ModelScorecard>& scorecards,
                  const std::filesystem::path& dir);

std::string mos_csv(const std::vector<MosRecord>& mos);

/// Reads a mos.json written by save_outputs.
std::vector<MosRecord> load_mos(const std::filesystem::path& path);

}  // namespace mosbench::store
