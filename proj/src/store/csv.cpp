#include "mosbench/store/csv.hpp"

#include <charconv>

#include "mosbench/core/errors.hpp"

namespace mosbench::store {

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

bool CsvReader::read_record(std::vector<std::string>& out) {
  out.clear();
  row_line_ = next_line_;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in_.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++next_line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++next_line_;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      out.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(source_, row_line_, "*", "unterminated quoted field");
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  out.push_back(std::move(field));
  return true;
}

void CsvReader::read_header(const std::vector<std::string_view>& required) {
  std::vector<std::string> header;
  if (!read_record(header)) throw SchemaError(source_ + ": empty file, expected a header row");
  columns_.clear();
  for (std::size_t i = 0; i < header.size(); ++i) columns_.emplace(header[i], i);
  for (auto name : required) {
    if (!columns_.contains(name)) {
      throw SchemaError(source_ + ": header lacks required column '" + std::string(name) + "'");
    }
  }
}

std::optional<std::vector<std::string>> CsvReader::next() {
  std::vector<std::string> row;
  while (read_record(row)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != columns_.size()) {
      throw ParseError(source_, row_line_, "*",
                       "expected " + std::to_string(columns_.size()) + " fields, got " +
                           std::to_string(row.size()));
    }
    return row;
  }
  return std::nullopt;
}

const std::string& CsvReader::field(const std::vector<std::string>& row,
                                    std::string_view name) const {
  auto it = columns_.find(name);
  if (it == columns_.end()) throw ParseError(source_, row_line_, std::string(name), "no such column");
  return row[it->second];
}

long long CsvReader::integer(const std::vector<std::string>& row, std::string_view name) const {
  const std::string& text = field(row, name);
  long long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(source_, row_line_, std::string(name), "not an integer: '" + text + "'");
  }
  return value;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace mosbench::store
