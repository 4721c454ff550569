#include "mosbench/bench/leaderboard.hpp"

#include <algorithm>
#include <map>

#include "mosbench/bench/evaluate.hpp"
#include "mosbench/metrics/rank.hpp"
#include "mosbench/store/outputs.hpp"

namespace mosbench::bench {
namespace {

std::optional<double> key_of(const ModelScorecard& c, SortKey key) {
  switch (key) {
    case SortKey::kPerception:
      return c.mean_perception;
    case SortKey::kCorrespondence:
      return c.mean_correspondence;
    case SortKey::kOverall:
      return c.mean_overall();
    case SortKey::kQaAccuracy:
      return c.qa_accuracy;
    case SortKey::kMeanRank:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string cell(const std::optional<double>& v, double scale = 1.0) {
  return v ? store::format_fixed(*v * scale, store::kTableDigits) : std::string("-");
}

}  // namespace

std::string_view to_string(SortKey key) noexcept {
  switch (key) {
    case SortKey::kPerception:
      return "perception";
    case SortKey::kCorrespondence:
      return "correspondence";
    case SortKey::kOverall:
      return "overall";
    case SortKey::kQaAccuracy:
      return "qa_accuracy";
    case SortKey::kMeanRank:
      return "mean_rank";
  }
  return "?";
}

std::optional<SortKey> parse_sort_key(std::string_view text) noexcept {
  for (auto k : {SortKey::kPerception, SortKey::kCorrespondence, SortKey::kOverall,
                 SortKey::kQaAccuracy, SortKey::kMeanRank}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::vector<LeaderboardRow> leaderboard(const std::vector<ModelScorecard>& cards, SortKey key) {
  std::vector<LeaderboardRow> rows;
  if (key == SortKey::kMeanRank) {
    std::map<ModelId, double> p, c, q;
    for (const auto& card : cards) {
      if (card.mean_perception) p[card.model_id] = *card.mean_perception;
      if (card.mean_correspondence) c[card.model_id] = *card.mean_correspondence;
      if (card.qa_accuracy) q[card.model_id] = *card.qa_accuracy;
    }
    const auto order = mean_rank_order({p, c, q});
    for (const auto& card : cards) {
      auto it = order.find(card.model_id);
      if (it != order.end()) rows.push_back({card, it->second, static_cast<int>(it->second)});
    }
    std::ranges::sort(rows, [](const LeaderboardRow& a, const LeaderboardRow& b) {
      return a.key != b.key ? a.key < b.key : a.card.model_id < b.card.model_id;
    });
    for (auto& r : rows) r.card.rank = r.rank;
    return rows;
  }

  for (const auto& card : cards) {
    if (auto v = key_of(card, key)) rows.push_back({card, *v, 0});
  }
  std::vector<double> values;
  for (const auto& r : rows) values.push_back(r.key);
  const auto ranks = metrics::rank(values, metrics::RankMode::kCompetition);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rank = static_cast<int>(ranks[i]);
    rows[i].card.rank = rows[i].rank;
  }
  std::ranges::sort(rows, [](const LeaderboardRow& a, const LeaderboardRow& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.card.model_id < b.card.model_id;
  });
  return rows;
}

std::vector<ModelScorecard> build_scorecards(const std::vector<MosRecord>& records,
                                             const Study& study, SortKey rank_key) {
  const TaskBreakdown breakdown = per_task_breakdown(records, study);
  std::vector<ModelScorecard> cards;
  for (const auto& [model, total] : breakdown.overall) {
    ModelScorecard card;
    card.model_id = model;
    card.mean_perception = total.mean_perception;
    card.mean_correspondence = total.mean_correspondence;
    card.qa_accuracy = total.qa_accuracy;
    card.per_task = breakdown.cells.at(model);
    card.videos = total.videos;
    cards.push_back(std::move(card));
  }
  std::map<ModelId, int> ranks;
  for (const auto& row : leaderboard(cards, rank_key)) ranks[row.card.model_id] = row.rank;
  for (auto& card : cards) {
    auto it = ranks.find(card.model_id);
    card.rank = it == ranks.end() ? 0 : it->second;
  }
  return cards;
}

std::string leaderboard_markdown(const std::vector<LeaderboardRow>& rows, const std::string& title) {
  std::string out = "## " + title + "\n\n";
  out += "| Rank | Model | Perception | Correspondence | Overall | QA Acc (%) | Videos |\n";
  out += "|---:|---|---:|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    out += "| " + std::to_string(r.rank) + " | " + r.card.model_id + " | " + cell(r.card.mean_perception) +
           " | " + cell(r.card.mean_correspondence) + " | " + cell(r.card.mean_overall()) + " | " +
           cell(r.card.qa_accuracy, 100.0) + " | " + std::to_string(r.card.videos) + " |\n";
  }
  return out;
}

}  // namespace mosbench::bench
