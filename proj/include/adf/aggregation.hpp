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

#include "adf/tensor.hpp"
#include "adf/rng.hpp"

namespace adf {

enum class AggregationMethod { last, weighted_sum, attentive };

std::string to_string(AggregationMethod m);
AggregationMethod parse_aggregation(const std::string& name);

/// Combines per-layer features [L, b, T, D] into [b, T, D].
///  - last:         layer L-1
///  - weighted_sum: Σ_l softmax(w)_l · F_l, w ∈ R^L learnable
///  - attentive:    s_l = v · tanh(W · mean_T(F_l)) per example, Σ_l softmax(s)_l · F_l
template <typename T>
class LayerAggregator {
 public:
  LayerAggregator(AggregationMethod method, int layers, int dim, int attention_hidden = 32);

  void build(Rng& rng);
  Tensor<T> forward(const Tensor<T>& features);
  /// dL/dfeatures for the last forward; accumulates parameter gradients.
  Tensor<T> backward(const Tensor<T>& grad_out);

  AggregationMethod method() const noexcept { return method_; }
  std::vector<NamedParam<T>> parameters();
  /// Mixing weights from the last forward, [b, L] row-major. For
  /// weighted_sum and last every row is identical.
  const std::vector<T>& weights() const noexcept { return alpha_; }
  /// softmax(w) for weighted_sum; one-hot for last.
  std::vector<T> layer_weights() const;

  Param<T> logits;        // weighted_sum: [L]
  Param<T> attn_proj;     // attentive: [H, D]
  Param<T> attn_vector;   // attentive: [H]

 private:
  AggregationMethod method_;
  int layers_;
  int dim_;
  int hidden_;

  // Forward cache.
  Tensor<T> features_;
  std::vector<T> alpha_;   // [b, L]
  Tensor<T> pooled_;       // attentive: [L, b, D]
  std::vector<T> hidden_act_;  // attentive: [b, L, H] tanh outputs
};

}  // namespace adf
