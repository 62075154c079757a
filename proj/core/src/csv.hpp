#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace basketflex::detail {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Comma-separated text with a required header row. Blank lines and lines
// whose first non-blank character is '#' are skipped. Fields may be double
// quoted; surrounding whitespace is trimmed.
class CsvTable {
 public:
  static CsvTable read(std::istream& in, std::string source);

  const std::string& source() const { return source_; }
  std::size_t header_line() const { return header_line_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }

  // Index of a required column; throws SchemaError naming the column.
  std::size_t column(std::string_view name) const;
  // Index of an optional column, or npos.
  std::size_t find_column(std::string_view name) const;

  // Field of `row` at `col`; throws SchemaError when the row is short.
  const std::string& field(const CsvRow& row, std::size_t col) const;

 private:
  std::string source_;
  std::size_t header_line_ = 0;
  std::vector<std::string> header_;
  std::vector<CsvRow> rows_;
};

std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field if it contains a comma, quote or leading/trailing blank.
std::string csv_escape(std::string_view field);

}  // namespace basketflex::detail
