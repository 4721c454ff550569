#include "mosbench/prep/quality.hpp"

#include <array>
#include <cmath>
#include <string>

#include "mosbench/core/errors.hpp"

namespace mosbench::prep {
namespace {

constexpr std::array<std::string_view, kQualityLevels> kNames = {"bad", "poor", "fair", "good",
                                                                 "excellent"};

}  // namespace

std::string_view to_string(QualityLevel level) noexcept {
  return kNames[static_cast<std::size_t>(level)];
}

std::optional<QualityLevel> parse_quality_level(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<QualityLevel>(i);
  }
  return std::nullopt;
}

QualityLevel quality_level(double s, double m, double M) {
  if (!std::isfinite(s) || !std::isfinite(m) || !std::isfinite(M)) {
    throw DomainError("quality_level: non-finite input");
  }
  if (!(m < M)) {
    throw DomainError("quality_level: need m < M, got m=" + std::to_string(m) + " M=" + std::to_string(M));
  }
  if (s < m || s > M) {
    throw DomainError("quality_level: score " + std::to_string(s) + " outside [" + std::to_string(m) +
                      ", " + std::to_string(M) + "]");
  }
  for (int i = 1; i < kQualityLevels; ++i) {
    if (s <= m + i * (M - m) / kQualityLevels) return static_cast<QualityLevel>(i - 1);
  }
  return QualityLevel::kExcellent;
}

}  // namespace mosbench::prep
