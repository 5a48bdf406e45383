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
#include <vector>

#include "adf/rng.hpp"
#include "adf/tensor.hpp"

namespace adf {

/// Fully connected layer, weight [out, in], input [b, in].
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(std::string name, int in, int out);

  void init(Rng& rng, double scale);
  Tensor<T> forward(const Tensor<T>& x) const;
  /// Accumulates parameter gradients and returns dL/dx.
  Tensor<T> backward(const Tensor<T>& x, const Tensor<T>& grad_y);

  int in_features() const noexcept { return in_; }
  int out_features() const noexcept { return out_; }
  void collect(std::vector<NamedParam<T>>& out);

  Param<T> weight;
  Param<T> bias;

 private:
  std::string name_;
  int in_ = 0;
  int out_ = 0;
};

enum class Activation { relu, leaky_relu, tanh, gelu };
Activation parse_activation(const std::string& name);

template <typename T>
T activate(Activation a, T x);
/// Derivative expressed in terms of the pre-activation.
template <typename T>
T activate_grad(Activation a, T x);

/// Mean over axis 1 of x [b, T, D]; exact for constant-in-time input.
template <typename T>
Tensor<T> time_mean(const Tensor<T>& x);

}  // namespace adf
