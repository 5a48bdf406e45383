// Copyright 2026 The adfkit Authors
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

#include "adf/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "adf/error.hpp"

namespace adf {

int StringTable::column(std::string_view name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

namespace {

// Splits one logical CSV record; quoted fields may span lines.
bool next_record(std::istream& in, std::vector<std::optional<std::string>>& out, int& line) {
  out.clear();
  std::string field;
  bool quoted = false, in_quotes = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = quoted = true;
    } else if (c == ',') {
      out.push_back(field.empty() && !quoted ? std::nullopt : std::optional(field));
      field.clear();
      quoted = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      ++line;
      out.push_back(field.empty() && !quoted ? std::nullopt : std::optional(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted CSV field near line " + std::to_string(line));
  if (!any) return false;
  out.push_back(field.empty() && !quoted ? std::nullopt : std::optional(field));
  return true;
}

}  // namespace

StringTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open table " + path.string());
  StringTable table;
  std::vector<std::optional<std::string>> rec;
  int line = 1;
  if (!next_record(in, rec, line)) return table;
  for (auto& cell : rec) {
    std::string name = cell.value_or("");
    // Tolerate a UTF-8 byte-order mark on the header.
    if (table.columns.empty() && name.rfind("\xEF\xBB\xBF", 0) == 0) name = name.substr(3);
    table.columns.push_back(name);
  }
  while (next_record(in, rec, line)) {
    if (rec.size() == 1 && !rec[0]) continue;  // blank line
    if (rec.size() != table.columns.size()) {
      throw DataError(path.string() + ": line " + std::to_string(line - 1) + " has " +
                      std::to_string(rec.size()) + " fields, header has " +
                      std::to_string(table.columns.size()));
    }
    table.rows.push_back(rec);
  }
  return table;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

void write_csv(const std::filesystem::path& path, const StringTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i]) out << csv_escape(*row[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

bool is_parquet_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".parquet" || ext == ".pq";
}

StringTable read_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("table not found: " + path.string());
  return is_parquet_path(path) ? read_parquet(path) : read_csv(path);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace adf
