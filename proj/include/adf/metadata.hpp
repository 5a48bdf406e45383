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
#include <string>
#include <vector>

#include "adf/records.hpp"
#include "adf/table_io.hpp"

namespace adf {

struct ConstructOptions {
  /// Training/validation splits need labels; evaluation-only tables may omit them.
  bool require_label = true;
  /// Copied into every record; defaults to the table file stem when empty.
  std::string dataset_name;
};

/// Table with the metadata columns plus whether the label column existed.
struct MetadataTable {
  std::vector<UtteranceRecord> records;
  bool has_labels = false;
};

/// Loads utterance metadata (CSV or Parquet) in file order.
/// Throws DataError: MissingColumn(name), DuplicateUttId(id), EmptyTable.
MetadataTable construct(const std::filesystem::path& table_path, const ConstructOptions& opts = {});
MetadataTable construct_from(const StringTable& table, const ConstructOptions& opts,
                             const std::string& source);

/// Inverse of construct for fixtures and generated corpora; only optional
/// columns with at least one value are written.
void write_metadata(const std::filesystem::path& path, const std::vector<UtteranceRecord>& records);

}  // namespace adf
