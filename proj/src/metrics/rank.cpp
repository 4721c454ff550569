#include "mosbench/metrics/rank.hpp"

#include <algorithm>
#include <numeric>

namespace mosbench::metrics {

std::vector<double> rank(std::span<const double> values, RankMode mode, RankOrder order) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    return order == RankOrder::kLargerIsBetter ? values[a] > values[b] : values[a] < values[b];
  };
  std::stable_sort(idx.begin(), idx.end(), better);

  std::vector<double> out(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[idx[end]] == values[idx[start]]) ++end;
    // positions start+1 .. end (1-based) are tied
    const double r = mode == RankMode::kCompetition
                         ? static_cast<double>(start + 1)
                         : (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) out[idx[k]] = r;
    start = end;
  }
  return out;
}

}  // namespace mosbench::metrics
