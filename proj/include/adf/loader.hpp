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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adf/audio.hpp"
#include "adf/augment.hpp"
#include "adf/components.hpp"
#include "adf/tensor.hpp"

namespace adf {

/// Fixed-shape waveform block.
struct AudioBatch {
  Tensor<float> waveforms;         // [batch, samples]
  std::vector<int> labels;         // 1 bonafide, 0 spoof, -1 unlabeled
  std::vector<std::string> utt_ids;
  std::vector<std::size_t> record_indices;

  std::size_t size() const noexcept { return utt_ids.size(); }
};

struct LoaderParams {
  int batch_size = 32;
  bool shuffle = false;
  int workers = 1;

  bool operator==(const LoaderParams&) const = default;
};

/// Batches are addressed by (epoch, index) and derived from the seed with
/// counter-based streams, so any batch can be regenerated without replaying
/// the ones before it (used for resume).
class BatchLoader {
 public:
  BatchLoader(std::shared_ptr<const Dataset> dataset, TransformParams transform,
              std::optional<AugmentationPolicy> policy, LoaderParams params, std::uint64_t seed,
              bool training);

  std::size_t num_records() const noexcept { return dataset_->records().size(); }
  std::size_t num_batches() const noexcept;
  const Dataset& dataset() const noexcept { return *dataset_; }
  const LoaderParams& params() const noexcept { return params_; }
  const TransformParams& transform_params() const noexcept { return transform_; }
  bool training() const noexcept { return training_; }

  /// Record order for an epoch: identity unless shuffling.
  std::vector<std::size_t> order(std::size_t epoch) const;
  AudioBatch batch(std::size_t epoch, std::size_t index) const;

  /// Waveform exactly as it enters a batch.
  std::vector<float> prepare(std::size_t record_index, std::size_t epoch) const;

 private:
  std::shared_ptr<const Dataset> dataset_;
  TransformParams transform_;
  std::optional<AugmentationPolicy> policy_;
  LoaderParams params_;
  std::uint64_t seed_;
  bool training_;
};

/// Training loaders get random crops and the augmentation policy; evaluation
/// loaders use leading crops and never augment.
BatchLoader make_loader(std::shared_ptr<const Dataset> dataset, const TransformParams& transform,
                        std::optional<AugmentationPolicy> policy, const LoaderParams& params,
                        std::uint64_t seed, bool training);

}  // namespace adf
