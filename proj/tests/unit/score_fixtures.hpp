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

#include <string>

#include "adf/evaluator.hpp"

namespace adf::testing {

// n bonafide and n spoof records whose EER is exactly k / n: k of each class
// sit on the wrong side of a tie point and are counted on both error curves.
inline ScoreSet planted_set(int k, int n, const std::string& dataset, std::uint64_t seed = 1,
                            const std::string& system = "sys", double offset = 0.0) {
  ScoreSet s;
  for (int i = 0; i < n; ++i) {
    ScoreRecord b;
    b.utt_id = dataset + "_b" + std::to_string(i);
    b.score = offset + (i < k ? 0.0 : 2.0);
    b.label = 1;
    b.dataset_name = dataset;
    b.seed = seed;
    b.system_id = system;
    s.push_back(b);
    ScoreRecord f = b;
    f.utt_id = dataset + "_s" + std::to_string(i);
    f.score = offset + (i < k ? 1.0 : -1.0);
    f.label = 0;
    s.push_back(f);
  }
  return s;
}

inline ScoreSet tagged(ScoreSet s, const std::string& gender, const std::string& language = {}) {
  for (auto& r : s) {
    r.gender = gender;
    if (!language.empty()) r.language = language;
  }
  return s;
}

inline ScoreSet concat(ScoreSet a, const ScoreSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace adf::testing
