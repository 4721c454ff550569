#pragma once

#include <string>
#include <vector>

#include "mosbench/core/types.hpp"

namespace mosbench::bench {

enum class SortKey {
  kPerception,
  kCorrespondence,
  kOverall,
  kQaAccuracy,
  /// Mean of the perception, correspondence and QA competition ranks, ranked again.
  kMeanRank,
};

std::string_view to_string(SortKey key) noexcept;
std::optional<SortKey> parse_sort_key(std::string_view text) noexcept;

struct LeaderboardRow {
  ModelScorecard card;
  double key = 0.0;
  int rank = 0;
};

/// Cards that carry the key, best first, with competition ranks; ties are listed
/// by model_id.
std::vector<LeaderboardRow> leaderboard(const std::vector<ModelScorecard>& cards, SortKey key);

/// Per-model scorecards from pipeline output. Ranks come from `rank_key`.
std::vector<ModelScorecard> build_scorecards(const std::vector<MosRecord>& records,
                                             const Study& study,
                                             SortKey rank_key = SortKey::kMeanRank);

/// Markdown table with two-decimal scores.
std::string leaderboard_markdown(const std::vector<LeaderboardRow>& rows, const std::string& title);

}  // namespace mosbench::bench
