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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adf {

/// Cells are nullopt when empty (CSV) or null (Parquet).
struct StringTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<std::string>>> rows;

  /// Index of `name`, or -1.
  int column(std::string_view name) const;
};

StringTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const StringTable& table);
std::string csv_escape(std::string_view cell);

/// True when the library was built with Parquet support.
bool parquet_available() noexcept;
StringTable read_parquet(const std::filesystem::path& path);
/// Writes string columns, except columns named in `numeric_columns` which
/// are written as nullable doubles.
void write_parquet(const std::filesystem::path& path, const StringTable& table,
                   const std::vector<std::string>& numeric_columns);

/// Dispatches on extension: .parquet/.pq → Parquet, otherwise CSV.
StringTable read_table(const std::filesystem::path& path);
bool is_parquet_path(const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace adf
