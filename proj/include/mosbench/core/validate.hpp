#pragma once

#include <string>
#include <vector>

#include "mosbench/core/types.hpp"

namespace mosbench {

struct Violation {
  std::string record;  // e.g. "rating[s01,v007,perception]"
  std::string rule;    // short rule tag, e.g. "score-range"
  std::string message;

  friend auto operator<=>(const Violation&, const Violation&) = default;
};

/// Checks every invariant of the core types. Returns an empty list iff the study
/// is well formed. The result is sorted, so it does not depend on record order.
std::vector<Violation> validate_study(const Study& study);

/// One line per violation, capped at `limit` lines plus a "... and N more" tail.
std::string summarize(const std::vector<Violation>& violations, std::size_t limit = 20);

}  // namespace mosbench
