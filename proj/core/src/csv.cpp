#include "csv.hpp"

#include <fmt/format.h>

#include "basketflex/error.hpp"

namespace basketflex::detail {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty()) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.emplace_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else if (!(was_quoted && (c == ' ' || c == '\t' || c == '\r'))) {
      current.push_back(c);
    }
  }
  fields.emplace_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\n") != std::string_view::npos ||
                            (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CsvTable CsvTable::read(std::istream& in, std::string source) {
  CsvTable table;
  table.source_ = std::move(source);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (skippable(line)) continue;
    auto fields = split_csv_line(line);
    if (table.header_.empty()) {
      table.header_ = std::move(fields);
      table.header_line_ = line_no;
    } else {
      table.rows_.push_back(CsvRow{line_no, std::move(fields)});
    }
  }
  if (table.header_.empty()) {
    throw Error(ErrorCode::SchemaError, "missing header row", {"header"}).at(table.source_, 0);
  }
  return table;
}

std::size_t CsvTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::string::npos;
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto idx = find_column(name);
  if (idx == std::string::npos) {
    throw Error(ErrorCode::SchemaError, fmt::format("required column '{}' not found in header", name),
                {std::string(name)})
        .at(source_, header_line_);
  }
  return idx;
}

const std::string& CsvTable::field(const CsvRow& row, std::size_t col) const {
  if (col >= row.fields.size()) {
    const std::string name = col < header_.size() ? header_[col] : std::to_string(col);
    throw Error(ErrorCode::SchemaError, fmt::format("row has no value for column '{}'", name), {name})
        .at(source_, row.line);
  }
  return row.fields[col];
}

}  // namespace basketflex::detail
