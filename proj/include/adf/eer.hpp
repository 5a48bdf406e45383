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

#include <limits>
#include <span>

namespace adf {

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct ErrorRates {
  double far = 0.0;  // spoof accepted: score >= t
  double frr = 0.0;  // bonafide rejected: score < t
};

/// Labels: 1 bonafide, 0 spoof. Thresholds sweep the sorted unique scores
/// plus +inf; the crossing of FAR and FRR is linearly interpolated between
/// adjacent thresholds, and an exact tie at a swept point is returned as is.
/// Throws DataError("SingleClass") unless both classes are present.
EerResult compute_eer(std::span<const double> scores, std::span<const int> labels);

ErrorRates rates_at(std::span<const double> scores, std::span<const int> labels, double threshold);

}  // namespace adf
