#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mosbench::store {

/// RFC 4180 style: comma separated, double-quoted fields may hold commas,
/// quotes ("") and newlines. Trailing CR is stripped.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source_name);

  /// Reads the header row and checks it contains every name in `required`.
  /// Throws SchemaError otherwise.
  void read_header(const std::vector<std::string_view>& required);

  /// Next data row, or nullopt at end of input. Line numbers are 1-based and
  /// refer to the line on which the row starts.
  std::optional<std::vector<std::string>> next();

  std::size_t line() const noexcept { return row_line_; }
  const std::string& source() const noexcept { return source_; }

  /// Field of the current row by header name; throws ParseError if absent.
  const std::string& field(const std::vector<std::string>& row, std::string_view name) const;
  bool has_column(std::string_view name) const { return columns_.contains(std::string(name)); }

  /// Parses an integer field, throwing ParseError naming row and column.
  long long integer(const std::vector<std::string>& row, std::string_view name) const;

 private:
  bool read_record(std::vector<std::string>& out);

  std::istream& in_;
  std::string source_;
  std::size_t next_line_ = 1;
  std::size_t row_line_ = 0;
  std::map<std::string, std::size_t, std::less<>> columns_;
};

/// Quotes a field only when it needs it.
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace mosbench::store
