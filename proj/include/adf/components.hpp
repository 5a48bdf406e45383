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

// Base interfaces of the five pluggable component kinds.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "adf/records.hpp"
#include "adf/rng.hpp"
#include "adf/tensor.hpp"

namespace adf {

class Component {
 public:
  virtual ~Component() = default;

  /// Registry name this instance was resolved from.
  const std::string& type_name() const noexcept { return type_name_; }
  void set_type_name(std::string name) { type_name_ = std::move(name); }

 private:
  std::string type_name_;
};

enum class FrontEndMode { frozen, finetune };

/// Maps waveforms [b, samples] to layered features [L, b, T, D].
template <typename T>
class FrontEnd : public Component {
 public:
  virtual int layer_count() const = 0;
  virtual int feature_dim() const = 0;
  /// Frame count T produced for an input of `samples` samples.
  virtual int frames(int samples) const = 0;
  virtual void build(Rng& rng) = 0;
  virtual Tensor<T> forward(const Tensor<T>& waves) = 0;
  /// Accumulates parameter gradients from dL/dfeatures of the last forward.
  virtual void backward(const Tensor<T>& grad_features) = 0;
  virtual std::vector<NamedParam<T>> parameters() = 0;

  FrontEndMode mode() const noexcept { return mode_; }
  void set_mode(FrontEndMode m) noexcept { mode_ = m; }

 private:
  FrontEndMode mode_ = FrontEndMode::finetune;
};

template <typename T>
struct BackEndOutput {
  Tensor<T> embedding;  // [b, E]
  Tensor<T> logits;     // [b, 2]
};

/// Maps aggregated features [b, T, D] to an embedding and two-class logits.
template <typename T>
class BackEnd : public Component {
 public:
  virtual void build(int feature_dim, Rng& rng) = 0;
  virtual int embedding_dim() const = 0;
  virtual BackEndOutput<T> forward(const Tensor<T>& features) = 0;
  /// Returns dL/dfeatures; either gradient may be all zeros.
  virtual Tensor<T> backward(const Tensor<T>& grad_embedding, const Tensor<T>& grad_logits) = 0;
  virtual std::vector<NamedParam<T>> parameters() = 0;
};

template <typename T>
struct LossOutput {
  T loss = T(0);
  std::vector<T> scores;
};

template <typename T>
struct LossGrad {
  Tensor<T> embedding;
  Tensor<T> logits;
};

/// Training objective plus score extraction (larger score = more bonafide).
template <typename T>
class Loss : public Component {
 public:
  virtual void build(int embedding_dim, Rng& rng) = 0;
  /// Label values: 1 = bonafide, 0 = spoof.
  virtual LossOutput<T> forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                                std::span<const int> labels) = 0;
  virtual std::vector<T> scores(const Tensor<T>& embedding, const Tensor<T>& logits) = 0;
  /// Gradient of the mean loss from the last forward.
  virtual LossGrad<T> backward() = 0;
  virtual std::vector<NamedParam<T>> parameters() = 0;
};

/// Length-preserving stochastic waveform transformation.
class Augmentation : public Component {
 public:
  virtual std::vector<float> apply(std::span<const float> wave, int sample_rate,
                                   Rng& rng) const = 0;
};

/// Source of utterance records and their audio.
class Dataset : public Component {
 public:
  virtual const std::vector<UtteranceRecord>& records() const = 0;
  virtual Waveform load(const UtteranceRecord& record) const = 0;
  /// False when the underlying table carries no label column.
  virtual bool has_labels() const = 0;
  virtual std::string name() const = 0;
  /// Throws DataError naming the first utterance whose audio is unavailable.
  virtual void check_sources() const {}
};

}  // namespace adf
