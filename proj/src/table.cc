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

#include "amalgam/table.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "amalgam/errors.h"
#include "amalgam/text.h"

namespace amalgam {

CellValue NormalizeCell(std::string_view raw) {
  std::u32string decoded = DecodeUtf8(raw);
  std::u32string norm;
  norm.reserve(decoded.size());
  bool pending_space = false;
  for (char32_t c : decoded) {
    if (IsSpace(c)) {
      pending_space = !norm.empty();
      continue;
    }
    if (IsControl(c)) continue;
    if (pending_space) norm.push_back(' ');
    pending_space = false;
    norm.push_back(c);
  }

  CellValue value;
  value.raw_ = EncodeUtf8(decoded);
  value.text_ = EncodeUtf8(norm);
  return value;
}

Table::Table(std::string table_id, std::vector<std::vector<CellValue>> rows)
    : id_(std::move(table_id)), n_rows_(rows.size()) {
  if (id_.empty() || id_.find_first_of("/\\") != std::string::npos) {
    throw std::invalid_argument("invalid table id '" + id_ + "'");
  }
  for (const auto &row : rows) n_cols_ = std::max(n_cols_, row.size());
  cells_.reserve(n_rows_ * n_cols_);
  for (auto &row : rows) {
    row.resize(n_cols_);
    std::move(row.begin(), row.end(), std::back_inserter(cells_));
  }
}

const CellValue &Table::cell(size_t row, size_t col) const {
  if (row >= n_rows_ || col >= n_cols_) {
    throw IndexOutOfRange("cell (" + std::to_string(row) + "," +
                          std::to_string(col) + ") outside " + id_);
  }
  return cells_[row * n_cols_ + col];
}

ColumnContext Table::Column(size_t col) const {
  if (col >= n_cols_) {
    throw IndexOutOfRange("column " + std::to_string(col) + " outside " + id_);
  }
  ColumnContext ctx{id_, col, {}};
  for (size_t r = 0; r < n_rows_; ++r) {
    const CellValue &v = cells_[r * n_cols_ + col];
    if (!v.missing()) ctx.items.push_back(v.text());
  }
  return ctx;
}

RowContext Table::Row(size_t row) const {
  if (row >= n_rows_) {
    throw IndexOutOfRange("row " + std::to_string(row) + " outside " + id_);
  }
  auto begin = cells_.begin() + static_cast<std::ptrdiff_t>(row * n_cols_);
  return RowContext{id_, row, {begin, begin + static_cast<std::ptrdiff_t>(n_cols_)}};
}

std::vector<CsvRecord> ParseCsvWithLines(std::string_view input) {
  const std::string text = SanitizeUtf8(input);
  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  bool in_quotes = false;
  bool any_quoted = false;
  size_t line = 1;
  record.line = 1;

  auto end_record = [&]() {
    record.fields.push_back(std::move(field));
    field.clear();
    bool blank = record.fields.size() == 1 && !any_quoted &&
                 NormalizeCell(record.fields[0]).missing();
    if (!blank) records.push_back(std::move(record));
    record = CsvRecord{};
    any_quoted = false;
  };

  size_t i = 0;
  // Skip a UTF-8 byte-order mark.
  if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        any_quoted = true;
        break;
      case ',':
        record.fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        record.line = line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (!field.empty() || !record.fields.empty() || any_quoted) end_record();
  return records;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  for (auto &rec : ParseCsvWithLines(text)) out.push_back(std::move(rec.fields));
  return out;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

Table TableFromCsv(std::string table_id, std::string_view csv_text) {
  std::vector<std::vector<CellValue>> rows;
  for (const auto &fields : ParseCsv(csv_text)) {
    std::vector<CellValue> row;
    row.reserve(fields.size());
    for (const auto &f : fields) row.push_back(NormalizeCell(f));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyTable("table " + table_id + " has no rows");
  return Table(std::move(table_id), std::move(rows));
}

Table LoadTable(const std::filesystem::path &path) {
  if (std::filesystem::is_directory(path)) {
    throw IoError(path.string() + " is a directory");
  }
  return TableFromCsv(path.stem().string(), ReadFile(path));
}

std::string QuoteCsv(std::string_view field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace amalgam
