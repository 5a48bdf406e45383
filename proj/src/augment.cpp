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

#include "adf/augment.hpp"

#include <cmath>

namespace adf {

void AugmentationPolicy::validate() const {
  for (const auto& item : items) {
    if (!(item.prob >= 0.0 && item.prob <= 1.0)) {
      throw ConfigError("augmentation \"" + item.type + "\": prob must lie in [0, 1]");
    }
  }
  if (mode == AugmentMode::parallel && items.empty()) {
    throw ConfigError("parallel augmentation requires at least one item");
  }
}

namespace {

std::vector<float> apply_checked(const AugmentItem& item, std::span<const float> wave,
                                 int sample_rate, Rng& rng) {
  if (!item.impl) throw ConfigError("UnknownAugmentation(\"" + item.type + "\")");
  auto out = item.impl->apply(wave, sample_rate, rng);
  if (out.size() != wave.size()) {
    throw DataError("LengthChanged(\"" + item.type + "\"): " + std::to_string(wave.size()) +
                    " -> " + std::to_string(out.size()) + " samples");
  }
  return out;
}

}  // namespace

std::vector<float> augment(std::span<const float> wave, int sample_rate,
                           const AugmentationPolicy& policy, Rng& rng, AugmentTrace* trace) {
  std::vector<float> x(wave.begin(), wave.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (policy.mode == AugmentMode::sequential) {
    for (std::size_t i = 0; i < policy.items.size(); ++i) {
      const auto& item = policy.items[i];
      if (unit(rng) < item.prob) {
        x = apply_checked(item, x, sample_rate, rng);
        if (trace) trace->applied.push_back(i);
      }
    }
    return x;
  }
  double total = 0.0;
  for (const auto& item : policy.items) total += item.prob;
  if (total <= 0.0) return x;
  const double u = unit(rng) * total;
  double acc = 0.0;
  std::size_t pick = policy.items.size();
  for (std::size_t i = 0; i < policy.items.size(); ++i) {
    if (policy.items[i].prob <= 0.0) continue;
    acc += policy.items[i].prob;
    pick = i;
    if (u < acc) break;
  }
  x = apply_checked(policy.items[pick], x, sample_rate, rng);
  if (trace) trace->applied.push_back(pick);
  return x;
}

AdditiveNoise::AdditiveNoise(const Params& params) : snr_db_(params.at("snr_db").get<double>()) {}

ParamSchema AdditiveNoise::schema() {
  return {{"snr_db", ParamType::real, 20.0, "target signal-to-noise ratio in dB"}};
}

std::vector<float> AdditiveNoise::apply(std::span<const float> wave, int, Rng& rng) const {
  double power = 0.0;
  for (float v : wave) power += static_cast<double>(v) * v;
  power /= static_cast<double>(std::max<std::size_t>(1, wave.size()));
  std::vector<float> out(wave.begin(), wave.end());
  if (power <= 0.0) return out;
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db_ / 10.0));
  std::normal_distribution<double> noise(0.0, sigma);
  for (float& v : out) v = static_cast<float>(v + noise(rng));
  return out;
}

}  // namespace adf
