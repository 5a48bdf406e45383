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
#include <span>
#include <vector>

#include "adf/records.hpp"
#include "adf/rng.hpp"

namespace adf {

/// Reads 16-bit PCM (or 32-bit float) WAV; channels are averaged to mono.
Waveform read_wav(const std::filesystem::path& path);
/// Writes mono 16-bit PCM; samples are clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const Waveform& wave);

/// Band-limited (Hann-windowed sinc) resampling. Output length is
/// round(n · to / from).
std::vector<float> resample(std::span<const float> input, int from_rate, int to_rate);

enum class PadMode { repeat, zeros };

struct TransformParams {
  int sample_rate = 16000;
  double duration_s = 4.0;
  bool normalize = false;
  PadMode pad_mode = PadMode::repeat;

  int target_samples() const;
  bool operator==(const TransformParams&) const = default;
};

/// Resample → pad/crop → normalize. With `crop_rng` the crop start is drawn
/// uniformly (training); without it the leading window is kept.
std::vector<float> transform(std::span<const float> wave, int source_rate,
                             const TransformParams& params, Rng* crop_rng = nullptr);

}  // namespace adf
