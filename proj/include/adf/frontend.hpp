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
#include "adf/kernels.hpp"
#include "adf/nn.hpp"
#include "adf/registry.hpp"

namespace adf {

/// Strided convolutional encoder: a three-conv stem brings the waveform to
/// frame rate, then `layers` residual blocks each emit one feature map.
template <typename T>
class ReferenceFrontEnd : public FrontEnd<T> {
 public:
  explicit ReferenceFrontEnd(const Params& params);

  int layer_count() const override { return layers_; }
  int feature_dim() const override { return dim_; }
  int frames(int samples) const override;
  void build(Rng& rng) override;
  Tensor<T> forward(const Tensor<T>& waves) override;
  void backward(const Tensor<T>& grad_features) override;
  std::vector<NamedParam<T>> parameters() override;

  std::size_t parameter_count() const;
  static ParamSchema schema();

 private:
  struct Conv {
    kernels::Conv1dGeom geom;
    Param<T> weight;
    Param<T> bias;
  };

  std::vector<Conv> stem_;
  std::vector<Conv> blocks_;
  int dim_ = 64;
  int layers_ = 4;
  Activation act_ = Activation::leaky_relu;

  // Forward cache: inputs and pre-activations of every conv.
  int batch_ = 0;
  std::vector<int> lens_;  // stem input lengths, then frame count
  std::vector<std::vector<T>> stem_in_, stem_pre_;
  std::vector<std::vector<T>> block_in_, block_pre_;
};

}  // namespace adf
