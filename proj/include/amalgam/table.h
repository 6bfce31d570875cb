// Copyright 2026 The Amalgam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Table loading and the row/column context views used by the annotators.
//
// Tables are read as comma-separated files with RFC-4180 quoting. Every row
// of the file is data; which cells get annotated is decided by the target
// files. Cells are normalized on load: invalid UTF-8 becomes U+FFFD, control
// characters are dropped, whitespace runs collapse to one space and the
// result is trimmed. A cell that normalizes to nothing is Missing.

#ifndef AMALGAM_TABLE_H_
#define AMALGAM_TABLE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace amalgam {

class CellValue {
 public:
  enum class Kind { kText, kMissing };

  CellValue() = default;

  Kind kind() const { return text_.empty() ? Kind::kMissing : Kind::kText; }
  bool missing() const { return text_.empty(); }

  // Normalized text; empty iff the cell is Missing.
  const std::string &text() const { return text_; }

  // Field as read, after UTF-8 repair and CSV unquoting.
  const std::string &raw() const { return raw_; }

  bool operator==(const CellValue &other) const = default;

 private:
  friend CellValue NormalizeCell(std::string_view raw);
  std::string raw_;
  std::string text_;
};

CellValue NormalizeCell(std::string_view raw);

struct ColumnContext {
  std::string table_id;
  size_t col = 0;
  std::vector<std::string> items;  // Text cells only, top to bottom.
};

struct RowContext {
  std::string table_id;
  size_t row = 0;
  std::vector<CellValue> items;  // One per column, Missing kept in place.
};

class Table {
 public:
  // Pads short rows with Missing cells. Throws std::invalid_argument for an
  // empty id or one containing a path separator.
  Table(std::string table_id, std::vector<std::vector<CellValue>> rows);

  const std::string &id() const { return id_; }
  size_t rows() const { return n_rows_; }
  size_t cols() const { return n_cols_; }

  // Throws IndexOutOfRange.
  const CellValue &cell(size_t row, size_t col) const;

  ColumnContext Column(size_t col) const;
  RowContext Row(size_t row) const;

 private:
  std::string id_;
  size_t n_rows_ = 0;
  size_t n_cols_ = 0;
  std::vector<CellValue> cells_;  // Row-major.
};

// Splits CSV text into records of raw (unnormalized, UTF-8 repaired) fields.
// Blank lines are skipped. An unterminated quote runs to end of input.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// Same, with the 1-based source line on which each record starts.
struct CsvRecord {
  size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> ParseCsvWithLines(std::string_view text);

// Reads a whole file. Throws IoError.
std::string ReadFile(const std::filesystem::path &path);

// Throws IoError if unreadable and EmptyTable if no rows remain.
Table LoadTable(const std::filesystem::path &path);
Table TableFromCsv(std::string table_id, std::string_view csv_text);

// Quotes a field for CSV output; every field is quoted.
std::string QuoteCsv(std::string_view field);

}  // namespace amalgam

#endif  // AMALGAM_TABLE_H_
