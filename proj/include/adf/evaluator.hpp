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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adf/assembly.hpp"
#include "adf/eer.hpp"
#include "adf/loader.hpp"

namespace adf {

struct ScoreRecord {
  std::string utt_id;
  double score = 0.0;
  std::optional<int> label;  // 1 bonafide, 0 spoof
  std::string dataset_name;
  std::uint64_t seed = 0;
  std::string system_id;
  std::optional<std::string> gender;  // "F" | "M" | "unknown"
  std::optional<std::string> language;
  std::optional<double> pesq;
  std::optional<double> nisqa_mos;

  bool operator==(const ScoreRecord&) const = default;
};

using ScoreSet = std::vector<ScoreRecord>;

/// One record per utterance, in table order; metadata copied verbatim.
template <typename T>
ScoreSet score_dataset(ModelAssembly<T>& model, const BatchLoader& loader,
                       const std::string& system_id, std::uint64_t seed);

/// CSV or Parquet by extension. Optional columns appear only when some
/// record carries them.
void write_scores(const std::filesystem::path& path, const ScoreSet& scores);
ScoreSet read_scores(const std::filesystem::path& path);

/// EER of a score set; nullopt when a class is missing.
std::optional<EerResult> eer_of(const ScoreSet& scores);

struct DatasetEer {
  std::string name;
  std::size_t n = 0;
  std::optional<double> eer;
  std::optional<double> threshold;
  std::string note;  // why eer is absent
};

/// EERs of one (system, seed): per test set, pooled groups, macro average.
struct SeedReport {
  std::string system_id;
  std::uint64_t seed = 0;
  std::vector<DatasetEer> datasets;
  std::vector<DatasetEer> pooled;
  std::optional<double> macro_eer;
};

/// Pooled group name: member names joined by '+'.
std::string pooled_name(const std::vector<std::string>& group);

SeedReport evaluate_sets(const std::vector<std::pair<std::string, ScoreSet>>& sets,
                         const std::vector<std::vector<std::string>>& pooled_sets,
                         const std::string& system_id, std::uint64_t seed);

/// Percent with two decimals, e.g. 0.12345 → "12.35".
std::string percent(double fraction);

nlohmann::ordered_json to_json(const SeedReport& r);
SeedReport seed_report_from_json(const nlohmann::json& j);
/// Writes <dir>/report.json and <dir>/report.csv.
void write_seed_report(const std::filesystem::path& dir, const SeedReport& r,
                       const nlohmann::ordered_json& extra = {});

struct SeedStat {
  std::map<std::uint64_t, double> per_seed;
  double mean = 0.0;
  double std = 0.0;  // unbiased; 0 when n = 1
  std::size_t n = 0;
  bool std_defined = false;  // false when n = 1
};

SeedStat seed_stat(const std::map<std::uint64_t, double>& per_seed);

struct EvalReport {
  std::string system_id;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, SeedStat> datasets;
  std::map<std::string, SeedStat> pooled;
  double macro_eer = 0.0;     // mean over datasets of seed-mean EERs
  SeedStat macro_per_seed;    // macro average within each seed, then over seeds
};

/// Records of one system across datasets and seeds. Every dataset must be
/// covered by every seed (MissingSeedCoverage otherwise) and carry labels.
EvalReport pool_and_summarize(const ScoreSet& records,
                              const std::vector<std::vector<std::string>>& pooled_sets = {});

nlohmann::ordered_json to_json(const EvalReport& r);

}  // namespace adf
