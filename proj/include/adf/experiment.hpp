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
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "adf/checkpoint.hpp"
#include "adf/config.hpp"
#include "adf/loader.hpp"

namespace adf {

struct RunOptions {
  bool overwrite = false;
  bool resume = false;
};

struct DataHandle {
  std::shared_ptr<const Dataset> train;
  std::shared_ptr<const Dataset> valid;
  std::vector<std::shared_ptr<const Dataset>> tests;
  std::vector<SplitSpec> test_specs;
  std::optional<BatchLoader> train_loader;
  std::optional<BatchLoader> valid_loader;

  BatchLoader test_loader(std::size_t i, std::uint64_t seed) const;
};

using AnyModel = std::variant<std::unique_ptr<ModelAssembly<float>>,
                              std::unique_ptr<ModelAssembly<double>>>;

struct Experiment {
  ExperimentConfig cfg;  // restricted to `seed`
  std::uint64_t seed = 0;
  std::filesystem::path run_dir;
  CheckpointMeta meta;
  DataHandle data;
  AnyModel model;
};

/// output_dir/exp_name/seed_<s>
std::filesystem::path run_dir_for(const ExperimentConfig& cfg, std::uint64_t seed);

/// Instantiates one split's dataset and checks its audio sources; `where`
/// prefixes error messages.
std::shared_ptr<const Dataset> make_split(const SplitSpec& s, const Registry& registry,
                                          const std::string& where, bool need_labels);

AugmentationPolicy make_policy(const AugmentSpec& spec, const Registry& registry);

/// Instantiates every dataset and checks labels and audio sources before
/// anything is written.
DataHandle build_data(const ExperimentConfig& cfg, const Registry& registry, std::uint64_t seed,
                      bool need_train);

AnyModel build_model(const ExperimentConfig& cfg, const Registry& registry, std::uint64_t seed);

CheckpointMeta make_meta(const ExperimentConfig& single_seed_cfg);

/// One experiment per configured seed, each with its run directory created
/// and config.effective.yaml archived.
std::vector<Experiment> build_experiment(const ExperimentConfig& cfg, const Registry& registry,
                                         const RunOptions& options = {});

}  // namespace adf
