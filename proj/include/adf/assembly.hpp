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

#include <memory>
#include <string>
#include <vector>

#include "adf/aggregation.hpp"
#include "adf/components.hpp"
#include "adf/registry.hpp"

namespace adf {

struct ComponentSpec {
  std::string type;
  Params params = Params::object();
  std::string name;  // display name for system ids; empty means type

  bool operator==(const ComponentSpec&) const = default;
};

struct ModelSpec {
  ComponentSpec frontend{"reference", Params::object()};
  FrontEndMode frontend_mode = FrontEndMode::finetune;
  AggregationMethod aggregation = AggregationMethod::last;
  int attention_hidden = 32;
  ComponentSpec backend{"mlp", Params::object()};
  ComponentSpec loss{"ce", Params::object()};

  bool operator==(const ModelSpec&) const = default;
};

/// Front-end → layer aggregation → back-end → loss.
template <typename T>
class ModelAssembly {
 public:
  using value_type = T;

  ModelAssembly(const ModelSpec& spec, const Registry& registry, std::uint64_t seed);

  /// Training forward; caches activations for backward().
  LossOutput<T> forward(const Tensor<float>& waves, std::span<const int> labels);
  /// Inference scores; larger means more bonafide.
  std::vector<T> score(const Tensor<float>& waves);
  /// Accumulates gradients of the mean loss from the last forward().
  void backward();

  /// Every parameter keyed frontend/…, aggregation/…, backend/…, loss/….
  std::vector<NamedParam<T>> parameters();
  /// parameters() minus the front-end when it is frozen.
  std::vector<NamedParam<T>> trainable();
  void zero_grad();

  std::vector<T> aggregation_weights() const { return aggregator_->weights(); }

  FrontEnd<T>& frontend() { return *frontend_; }
  LayerAggregator<T>& aggregator() { return *aggregator_; }
  BackEnd<T>& backend() { return *backend_; }
  Loss<T>& loss() { return *loss_; }
  const ModelSpec& spec() const noexcept { return spec_; }

 private:
  Tensor<T> features(const Tensor<float>& waves);

  ModelSpec spec_;
  std::unique_ptr<FrontEnd<T>> frontend_;
  std::unique_ptr<LayerAggregator<T>> aggregator_;
  std::unique_ptr<BackEnd<T>> backend_;
  std::unique_ptr<Loss<T>> loss_;
};

}  // namespace adf
