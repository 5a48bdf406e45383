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

#include <nlohmann/json.hpp>

#include "adf/checkpoint.hpp"
#include "adf/config.hpp"
#include "adf/loader.hpp"

namespace adf {

struct HistoryRow {
  long step = 0;
  int epoch = 0;  // 1-based
  std::string split;  // "train" | "valid"
  double loss = 0.0;
  std::optional<double> eer;

  nlohmann::json to_json() const;
  static HistoryRow from_json(const nlohmann::json& j);
  bool operator==(const HistoryRow&) const = default;
};

/// Optional metric sink; the trainer runs without one.
class Tracker {
 public:
  virtual ~Tracker() = default;
  virtual void log(const HistoryRow& row) = 0;
};

struct ValidationResult {
  double loss = 0.0;
  std::optional<double> eer;  // absent when the split has a single class
};

/// Patience counts validations without a strict improvement beyond min_delta.
class EarlyStopper {
 public:
  EarlyStopper(int patience, double min_delta) : patience_(patience), min_delta_(min_delta) {}

  /// Records one validation; returns true when it is the new best.
  bool observe(double val_loss, TrainState& state) const;
  bool should_stop(const TrainState& state) const { return state.since_improvement >= patience_; }

 private:
  int patience_;
  double min_delta_;
};

struct TrainOptions {
  bool resume = false;
  /// Return after this many steps in this call (0 = run to completion),
  /// leaving a resumable last checkpoint.
  long stop_after_steps = 0;
  Tracker* tracker = nullptr;
  /// Replaces validate() when set; receives the 1-based validation index.
  std::function<ValidationResult(int)> validator;
};

struct TrainReport {
  std::filesystem::path best_checkpoint;
  std::filesystem::path last_checkpoint;
  std::vector<HistoryRow> history;
  TrainState state;
  bool interrupted = false;
};

/// Batch-size-weighted mean loss and EER over a labeled, unaugmented loader.
template <typename T>
ValidationResult validate(ModelAssembly<T>& model, const BatchLoader& loader);

template <typename T>
TrainReport train(ModelAssembly<T>& model, const BatchLoader& train_loader,
                  const BatchLoader* valid_loader, const TrainSection& cfg,
                  const std::filesystem::path& run_dir, const CheckpointMeta& meta,
                  const TrainOptions& options = {});

std::vector<HistoryRow> read_history(const std::filesystem::path& path);

}  // namespace adf
