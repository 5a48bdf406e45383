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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adf/config.hpp"
#include "adf/registry.hpp"

namespace adf {

/// Grid axes bound into a template config by ${axis} or ${axis.field}
/// placeholders. A placeholder that is a whole scalar is replaced by the
/// value itself (keeping its type); inside a longer string it is spliced in.
/// Scalar axis values act as {name: v, type: v}.
struct MatrixSpec {
  std::string name = "matrix";
  std::filesystem::path output_root;  // absolute
  std::filesystem::path base_dir;     // resolves relative paths in the template
  std::vector<nlohmann::json> frontend, backend, training_set;
  std::vector<std::uint64_t> seeds;   // empty: the template decides
  nlohmann::json templ;
};

MatrixSpec load_matrix(const std::filesystem::path& path);
MatrixSpec parse_matrix(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Replaces placeholders; unbound ones raise SchemaError.
nlohmann::json bind_template(const nlohmann::json& templ,
                             const std::map<std::string, nlohmann::json>& values);

struct MatrixCell {
  std::string system_id;
  std::string frontend, backend, training_set;  // axis value names
  std::filesystem::path config_path;
  std::filesystem::path run_root;  // holds seed_<s>/ directories
  std::vector<std::uint64_t> seeds;
};

struct GridInfo {
  std::string name;
  std::vector<std::string> frontends, backends, training_sets;
  std::vector<std::uint64_t> seeds;
  std::vector<MatrixCell> cells;
};

nlohmann::ordered_json to_json(const GridInfo& g);
GridInfo grid_from_json(const nlohmann::json& j);

/// Validates and writes one effective config per (frontend, backend,
/// training_set) cell into out_dir, plus out_dir/grid.json. The grid file is
/// also copied to <output_root>/<name>/grid.json for aggregation.
GridInfo expand_matrix(const MatrixSpec& spec, Registry& registry,
                       const std::filesystem::path& out_dir);

struct LongRow {
  std::string system_id, frontend, backend, training_set, dataset;
  std::uint64_t seed = 0;
  double eer = 0.0;
};

struct AggregateResult {
  std::vector<LongRow> rows;
  std::vector<std::string> frontends, backends, training_sets, datasets;
  std::vector<std::uint64_t> seeds;
};

/// Collects <root>/**/seed_<s>/eval/report.json. Axes come from
/// <root>/grid.json when present, else from the reports themselves; every
/// (system, seed, dataset) cell must be present or IncompleteGridError lists
/// the missing ones.
AggregateResult collect_reports(const std::filesystem::path& root);

/// Writes long.csv, per_seed.csv, seed_mean.csv, heatmap.csv, boxplot.csv,
/// marginal.csv and marginal_means.json into out_dir.
void write_aggregates(const AggregateResult& agg, const std::filesystem::path& out_dir);

/// Name of the seed directory, and its inverse.
std::string seed_dir_name(std::uint64_t seed);
std::optional<std::uint64_t> parse_seed_dir(const std::string& name);

}  // namespace adf
