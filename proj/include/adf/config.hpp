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
#include <optional>
#include <string>
#include <vector>

#include "adf/assembly.hpp"
#include "adf/audio.hpp"
#include "adf/augment.hpp"
#include "adf/loader.hpp"
#include "adf/registry.hpp"

namespace adf {

/// A config value that failed validation; key_path is dotted ("training.lr").
class SchemaError : public ConfigError {
 public:
  SchemaError(std::string key_path, const std::string& reason)
      : ConfigError("SchemaError(\"" + key_path + "\", " + reason + ")"),
        key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

struct AugmentItemSpec {
  std::string type;
  Params params = Params::object();
  double prob = 1.0;
  bool operator==(const AugmentItemSpec&) const = default;
};

struct AugmentSpec {
  AugmentMode mode = AugmentMode::sequential;
  std::vector<AugmentItemSpec> items;
  bool operator==(const AugmentSpec&) const = default;
};

struct SplitSpec {
  ComponentSpec dataset;
  TransformParams transform;
  std::optional<AugmentSpec> augment;
  LoaderParams loader;
  bool operator==(const SplitSpec&) const = default;
};

struct DataSection {
  std::optional<SplitSpec> train;
  std::optional<SplitSpec> valid;
  std::optional<SplitSpec> test;
  bool operator==(const DataSection&) const = default;
};

enum class Precision { float32, float64 };

struct TrainSection {
  std::string optimizer = "adam";
  double lr = 1e-6;
  int max_epochs = 100;
  int val_interval = 0;  // steps; 0 = once per epoch
  int patience = 5;
  double min_delta = 0.0;
  int keep_every = 0;  // extra checkpoint every k validations; 0 = off
  Precision precision = Precision::float32;
  bool operator==(const TrainSection&) const = default;
};

struct FairnessSection {
  std::vector<std::string> attributes;
  int quantiles = 4;
  std::vector<double> pesq_edges;
  std::vector<double> nisqa_edges;
  double alpha = 0.5;
  std::string mode = "far_frr_gini";
  bool include_unknown = false;
  bool operator==(const FairnessSection&) const = default;
};

struct EvalSection {
  std::vector<SplitSpec> test_sets;
  FairnessSection fairness;
  std::vector<std::vector<std::string>> pooled_sets;
  bool operator==(const EvalSection&) const = default;
};

struct ExperimentConfig {
  std::string exp_name = "experiment";
  std::filesystem::path output_dir = "runs";
  std::vector<std::uint64_t> seeds{42};
  std::vector<std::string> plugins;
  DataSection data;
  ModelSpec model;
  TrainSection training;
  EvalSection evaluation;

  bool operator==(const ExperimentConfig&) const = default;

  /// Test splits to score: evaluation.test_sets, else data.test.
  std::vector<SplitSpec> test_splits() const;
  /// Same config restricted to one seed.
  ExperimentConfig for_seed(std::uint64_t seed) const;
};

/// Validates a parsed document. Relative paths resolve against base_dir.
/// Plugins named by the config are loaded into `registry` and every
/// component type must resolve there.
ExperimentConfig parse_config(const nlohmann::json& doc, Registry& registry,
                              const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path, Registry& registry);
ExperimentConfig load_config_text(const std::string& text, Registry& registry,
                                  const std::filesystem::path& base_dir);

/// Effective config with every default spelled out, fixed key order.
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);
std::string to_yaml(const ExperimentConfig& cfg);
/// FNV-1a of to_yaml(cfg), hex.
std::string config_hash(const ExperimentConfig& cfg);

std::string to_string(AugmentMode m);
std::string to_string(Precision p);
std::string to_string(FrontEndMode m);

/// "<frontend>-<backend>-<training set>", each field percent-encoded.
std::string system_id(const ExperimentConfig& cfg);
std::string encode_field(const std::string& s);
std::string decode_field(const std::string& s);
std::vector<std::string> split_system_id(const std::string& id);

/// Training set tag: the train dataset's "name" param, else the table stem,
/// else the dataset type.
std::string training_set_name(const ExperimentConfig& cfg);

}  // namespace adf
