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

#include <optional>
#include <string>
#include <vector>

namespace adf {

enum class Label { spoof = 0, bonafide = 1 };
enum class Gender { female, male, unknown };

std::string to_string(Label label);
std::string to_string(Gender gender);
/// Accepts "bonafide"/"spoof" (case-insensitive, "bona-fide" tolerated).
std::optional<Label> parse_label(std::string_view text);
/// "F"/"M" (case-insensitive); anything else maps to unknown.
Gender parse_gender(std::string_view text);

/// One row of dataset metadata.
struct UtteranceRecord {
  std::string utt_id;
  std::string audio_path;
  std::optional<Label> label;
  std::optional<Gender> gender;
  std::optional<std::string> language;
  std::optional<double> pesq;
  std::optional<double> nisqa_mos;
  std::string dataset_name;

  bool operator==(const UtteranceRecord&) const = default;
};

/// Mono audio at a known rate.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 16000;
};

}  // namespace adf
