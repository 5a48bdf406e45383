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
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adf/assembly.hpp"
#include "adf/optimizer.hpp"

namespace adf {

/// Loop position and early-stopping bookkeeping. Batches are pure
/// functions of (seed, epoch, index), so the counters are the whole RNG state.
struct TrainState {
  long step = 0;
  int epoch = 0;              // 0-based epoch in progress
  std::size_t batch = 0;      // next batch index within the epoch
  double best_val_loss = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  int validations = 0;
  int best_validation = 0;    // 1-based; 0 = none yet
  long best_step = -1;
  std::size_t history_rows = 0;
  bool finished = false;
  std::string stop_reason;

  nlohmann::json to_json() const;
  static TrainState from_json(const nlohmann::json& j);
  bool operator==(const TrainState&) const = default;
};

struct CheckpointMeta {
  std::string config_yaml;
  std::string config_hash;
  std::string system_id;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCheckpointMagic = "ADFCKPT1";

/// Written to a temporary sibling and renamed into place.
template <typename T>
void save_checkpoint(const std::filesystem::path& path, ModelAssembly<T>& model,
                     const Adam<T>* adam, const TrainState& state, const CheckpointMeta& meta);

struct Checkpoint {
  std::filesystem::path path;
  nlohmann::json header;
  std::vector<char> data;

  std::string dtype() const { return header.at("dtype").get<std::string>(); }
  CheckpointMeta meta() const;
  TrainState state() const { return TrainState::from_json(header.at("state")); }
};

Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Loads parameters (and optimizer moments when `adam` is given). Every
/// model parameter must be present with the same shape and dtype.
template <typename T>
void restore_checkpoint(const Checkpoint& ckpt, ModelAssembly<T>& model, Adam<T>* adam);

}  // namespace adf
