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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adf/evaluator.hpp"
#include "adf/experiment.hpp"
#include "adf/trainer.hpp"

namespace adf {

struct RunResult {
  std::filesystem::path run_dir;
  std::uint64_t seed = 0;
  std::string system_id;
  TrainReport train;
  std::optional<SeedReport> eval;  // absent when interrupted or without test sets
};

/// Trains every seed, then scores the test sets with the best checkpoint
/// into <run_dir>/eval.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, Registry& registry,
                                      const RunOptions& run_options,
                                      const TrainOptions& train_options = {});

struct NamedSplit {
  std::string name;
  BatchLoader loader;
};

/// Scores each split, writes <eval_dir>/scores/<name>.csv and the report.
SeedReport score_splits(AnyModel& model, const std::vector<NamedSplit>& splits,
                        const std::vector<std::vector<std::string>>& pooled_sets,
                        const std::string& system_id, std::uint64_t seed,
                        const std::filesystem::path& eval_dir);

/// Score file name for a dataset.
std::string score_file_name(const std::string& dataset);

struct LoadedCheckpoint {
  ExperimentConfig cfg;  // single seed
  CheckpointMeta meta;
  AnyModel model;
};

LoadedCheckpoint load_for_eval(const std::filesystem::path& checkpoint, Registry& registry);

struct EvalRequest {
  std::filesystem::path checkpoint;
  std::vector<std::filesystem::path> tables;
  std::optional<std::filesystem::path> config;  // checked against the checkpoint hash
  bool force = false;                            // hash mismatch becomes a warning
  std::filesystem::path out_dir;
  std::function<void(const std::string&)> warn;
};

SeedReport evaluate_checkpoint(const EvalRequest& request, Registry& registry);

}  // namespace adf
