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
#include "adf/registry.hpp"

namespace adf {

/// Unit-normalized class centers shared by the margin losses.
template <typename T>
class CosineHead {
 public:
  CosineHead() = default;
  CosineHead(int classes, int dim);

  void init(Rng& rng);
  /// cos[b, C]; caches the normalized operands for backward.
  Tensor<T> forward(const Tensor<T>& embedding);
  /// Accumulates dL/dcenters and returns dL/dembedding.
  Tensor<T> backward(const Tensor<T>& grad_cos);

  Param<T> centers;

 private:
  int classes_ = 0;
  int dim_ = 0;
  Tensor<T> xhat_;
  std::vector<T> xnorm_;
  Tensor<T> what_;
  std::vector<T> wnorm_;
  Tensor<T> cos_;
};

/// Two-class softmax cross-entropy on the backend logits.
template <typename T>
class CrossEntropyLoss : public Loss<T> {
 public:
  explicit CrossEntropyLoss(const Params& params);

  void build(int, Rng&) override {}
  LossOutput<T> forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                        std::span<const int> labels) override;
  std::vector<T> scores(const Tensor<T>& embedding, const Tensor<T>& logits) override;
  LossGrad<T> backward() override;
  std::vector<NamedParam<T>> parameters() override { return {}; }

  static ParamSchema schema();

 private:
  std::vector<std::size_t> emb_shape_;
  Tensor<T> grad_logits_;
};

/// One-class softmax: compacts bonafide around a learned center.
template <typename T>
class OcSoftmaxLoss : public Loss<T> {
 public:
  explicit OcSoftmaxLoss(const Params& params);

  void build(int embedding_dim, Rng& rng) override;
  LossOutput<T> forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                        std::span<const int> labels) override;
  std::vector<T> scores(const Tensor<T>& embedding, const Tensor<T>& logits) override;
  LossGrad<T> backward() override;
  std::vector<NamedParam<T>> parameters() override;

  static ParamSchema schema();

 private:
  T alpha_, m_real_, m_fake_;
  CosineHead<T> head_;
  std::vector<std::size_t> logit_shape_;
  Tensor<T> grad_cos_;
};

/// Additive-margin softmax: target logit s·(cos − m).
template <typename T>
class AmSoftmaxLoss : public Loss<T> {
 public:
  explicit AmSoftmaxLoss(const Params& params);

  void build(int embedding_dim, Rng& rng) override;
  LossOutput<T> forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                        std::span<const int> labels) override;
  std::vector<T> scores(const Tensor<T>& embedding, const Tensor<T>& logits) override;
  LossGrad<T> backward() override;
  std::vector<NamedParam<T>> parameters() override;

  static ParamSchema schema();

 private:
  T s_, m_;
  CosineHead<T> head_;
  std::vector<std::size_t> logit_shape_;
  Tensor<T> grad_cos_;
};

/// Angular softmax: target logit s·ψ(θ), ψ(θ) = (−1)^k cos(mθ) − 2k.
template <typename T>
class ASoftmaxLoss : public Loss<T> {
 public:
  explicit ASoftmaxLoss(const Params& params);

  void build(int embedding_dim, Rng& rng) override;
  LossOutput<T> forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                        std::span<const int> labels) override;
  std::vector<T> scores(const Tensor<T>& embedding, const Tensor<T>& logits) override;
  LossGrad<T> backward() override;
  std::vector<NamedParam<T>> parameters() override;

  static ParamSchema schema();

  /// ψ and dψ/dcos for margin m.
  static std::pair<T, T> psi(T cos, int m);

 private:
  T s_;
  int m_;
  CosineHead<T> head_;
  std::vector<std::size_t> logit_shape_;
  Tensor<T> grad_cos_;
};

}  // namespace adf
