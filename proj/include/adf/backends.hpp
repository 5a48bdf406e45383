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

#include <vector>

#include "adf/components.hpp"
#include "adf/nn.hpp"
#include "adf/registry.hpp"

namespace adf {

/// Temporal mean pool → hidden stack → embedding → linear two-class head.
template <typename T>
class MlpBackEnd : public BackEnd<T> {
 public:
  explicit MlpBackEnd(const Params& params);

  void build(int feature_dim, Rng& rng) override;
  int embedding_dim() const override { return embedding_dim_; }
  BackEndOutput<T> forward(const Tensor<T>& features) override;
  Tensor<T> backward(const Tensor<T>& grad_embedding, const Tensor<T>& grad_logits) override;
  std::vector<NamedParam<T>> parameters() override;

  const std::vector<int>& hidden() const noexcept { return hidden_sizes_; }
  static ParamSchema schema();

 private:
  std::vector<int> hidden_sizes_;
  Activation act_;
  std::vector<Linear<T>> layers_;
  Linear<T> head_;
  int embedding_dim_ = 0;

  std::vector<std::size_t> in_shape_;
  std::vector<Tensor<T>> inputs_;  // input of each hidden layer
  std::vector<Tensor<T>> pre_;     // pre-activations
  Tensor<T> embedding_;
};

/// Mean or mean‖std statistics over time, then a linear head.
template <typename T>
class PoolBackEnd : public BackEnd<T> {
 public:
  explicit PoolBackEnd(const Params& params);

  void build(int feature_dim, Rng& rng) override;
  int embedding_dim() const override { return with_std_ ? 2 * dim_ : dim_; }
  BackEndOutput<T> forward(const Tensor<T>& features) override;
  Tensor<T> backward(const Tensor<T>& grad_embedding, const Tensor<T>& grad_logits) override;
  std::vector<NamedParam<T>> parameters() override;

  static ParamSchema schema();

 private:
  bool with_std_ = false;
  int dim_ = 0;
  Linear<T> head_;

  Tensor<T> features_;
  Tensor<T> mean_;
  Tensor<T> std_;
  Tensor<T> embedding_;
};

}  // namespace adf
