#pragma once

#include <optional>
#include <string_view>

namespace mosbench::prep {

enum class QualityLevel { kBad, kPoor, kFair, kGood, kExcellent };

inline constexpr int kQualityLevels = 5;

std::string_view to_string(QualityLevel level) noexcept;
std::optional<QualityLevel> parse_quality_level(std::string_view text) noexcept;

/// Level i (0-based) with m + i(M-m)/5 < s <= m + (i+1)(M-m)/5. s == m is bad.
/// Throws DomainError when m >= M, s is outside [m, M] or any input is not finite.
QualityLevel quality_level(double s, double m, double M);

}  // namespace mosbench::prep
