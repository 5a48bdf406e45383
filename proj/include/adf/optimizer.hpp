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

#include <map>
#include <string>
#include <vector>

#include "adf/kernels.hpp"
#include "adf/tensor.hpp"

namespace adf {

/// Bias-corrected Adam with moment buffers keyed by parameter path.
template <typename T>
class Adam {
 public:
  struct Moments {
    std::vector<T> m;
    std::vector<T> v;
  };

  explicit Adam(kernels::AdamHyper hyper = {}) : hyper_(hyper) {}

  /// Throws NumericError when any gradient is non-finite; nothing is updated then.
  void step(const std::vector<NamedParam<T>>& params);

  long steps() const noexcept { return t_; }
  void set_steps(long t) noexcept { t_ = t; }
  const kernels::AdamHyper& hyper() const noexcept { return hyper_; }
  std::map<std::string, Moments>& moments() noexcept { return moments_; }
  const std::map<std::string, Moments>& moments() const noexcept { return moments_; }

 private:
  kernels::AdamHyper hyper_;
  long t_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace adf
