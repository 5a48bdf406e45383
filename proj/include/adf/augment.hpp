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
#include <span>
#include <string>
#include <vector>

#include "adf/components.hpp"
#include "adf/registry.hpp"

namespace adf {

enum class AugmentMode { sequential, parallel };

struct AugmentItem {
  std::string type;
  Params params;
  double prob = 1.0;
  std::shared_ptr<const Augmentation> impl;
};

struct AugmentationPolicy {
  AugmentMode mode = AugmentMode::sequential;
  std::vector<AugmentItem> items;

  /// Probabilities in [0, 1]; parallel mode needs at least one item.
  void validate() const;
};

/// Which items fired during one augment() call (indices into policy.items).
struct AugmentTrace {
  std::vector<std::size_t> applied;
};

/// Sequential: each item fires independently with its probability, in
/// order. Parallel: one item is drawn with probability proportional to its
/// prob and applied unconditionally (identity when every prob is 0).
std::vector<float> augment(std::span<const float> wave, int sample_rate,
                           const AugmentationPolicy& policy, Rng& rng,
                           AugmentTrace* trace = nullptr);

/// Gaussian noise scaled to a target signal-to-noise ratio.
class AdditiveNoise : public Augmentation {
 public:
  explicit AdditiveNoise(const Params& params);
  std::vector<float> apply(std::span<const float> wave, int sample_rate, Rng& rng) const override;
  double snr_db() const noexcept { return snr_db_; }

  static ParamSchema schema();

 private:
  double snr_db_;
};

}  // namespace adf
