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

#include "adf/backends.hpp"

#include <cmath>

#include "adf/error.hpp"

namespace adf {

namespace {

template <typename T>
void check_features(const Tensor<T>& x, int dim, const char* who) {
  if (x.rank() != 3 || x.dim(1) < 1 || x.dim(2) != static_cast<std::size_t>(dim)) {
    throw ConfigError(std::string(who) + " backend: expected features [b, T>=1, " +
                      std::to_string(dim) + "]");
  }
}

// Spreads d(mean)/dx = 1/T over every frame.
template <typename T>
void add_mean_grad(Tensor<T>& dx, const Tensor<T>& dmean) {
  const std::size_t b = dx.dim(0), t = dx.dim(1), d = dx.dim(2);
  const T inv_t = T(1) / static_cast<T>(t);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t ti = 0; ti < t; ++ti) {
      T* row = dx.ptr() + (i * t + ti) * d;
      const T* g = dmean.ptr() + i * d;
      for (std::size_t k = 0; k < d; ++k) row[k] += g[k] * inv_t;
    }
  }
}

}  // namespace

template <typename T>
MlpBackEnd<T>::MlpBackEnd(const Params& params)
    : hidden_sizes_(params.at("hidden").get<std::vector<int>>()),
      act_(parse_activation(params.at("activation").get<std::string>())) {
  if (params.at("pooling").get<std::string>() != "mean") {
    throw ConfigError("mlp backend: pooling must be \"mean\"");
  }
  for (int h : hidden_sizes_) {
    if (h < 1) throw ConfigError("mlp backend: hidden sizes must be >= 1");
  }
}

template <typename T>
ParamSchema MlpBackEnd<T>::schema() {
  return {{"hidden", ParamType::int_list, std::vector<int>{128}, "hidden layer widths"},
          {"activation", ParamType::string, "relu", ""},
          {"pooling", ParamType::string, "mean", "temporal pooling"}};
}

template <typename T>
void MlpBackEnd<T>::build(int feature_dim, Rng& rng) {
  layers_.clear();
  int in = feature_dim;
  for (std::size_t i = 0; i < hidden_sizes_.size(); ++i) {
    layers_.emplace_back("fc" + std::to_string(i), in, hidden_sizes_[i]);
    layers_.back().init(rng, std::sqrt(2.0));
    in = hidden_sizes_[i];
  }
  embedding_dim_ = in;
  head_ = Linear<T>("head", in, 2);
  head_.init(rng, 1.0);
}

template <typename T>
std::vector<NamedParam<T>> MlpBackEnd<T>::parameters() {
  std::vector<NamedParam<T>> out;
  for (auto& l : layers_) l.collect(out);
  head_.collect(out);
  return out;
}

template <typename T>
BackEndOutput<T> MlpBackEnd<T>::forward(const Tensor<T>& features) {
  const int in_dim = layers_.empty() ? embedding_dim_ : layers_.front().in_features();
  check_features(features, in_dim, "mlp");
  in_shape_ = features.shape;
  Tensor<T> h = time_mean(features);
  inputs_.clear();
  pre_.clear();
  for (auto& layer : layers_) {
    inputs_.push_back(h);
    Tensor<T> z = layer.forward(h);
    h = z;
    for (auto& v : h.data) v = activate(act_, v);
    pre_.push_back(std::move(z));
  }
  embedding_ = h;
  BackEndOutput<T> out;
  out.logits = head_.forward(h);
  out.embedding = std::move(h);
  return out;
}

template <typename T>
Tensor<T> MlpBackEnd<T>::backward(const Tensor<T>& grad_embedding, const Tensor<T>& grad_logits) {
  Tensor<T> g = head_.backward(embedding_, grad_logits);
  for (std::size_t k = 0; k < g.size(); ++k) g.data[k] += grad_embedding.data[k];
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const auto& z = pre_[i];
    for (std::size_t k = 0; k < g.size(); ++k) g.data[k] *= activate_grad(act_, z.data[k]);
    g = layers_[i].backward(inputs_[i], g);
  }
  Tensor<T> dx(in_shape_);
  add_mean_grad(dx, g);
  return dx;
}

template <typename T>
PoolBackEnd<T>::PoolBackEnd(const Params& params) {
  const auto stats = params.at("stats").get<std::string>();
  if (stats == "mean") with_std_ = false;
  else if (stats == "mean+std") with_std_ = true;
  else throw ConfigError("pool backend: stats must be \"mean\" or \"mean+std\"");
}

template <typename T>
ParamSchema PoolBackEnd<T>::schema() {
  return {{"stats", ParamType::string, "mean+std", "mean | mean+std"}};
}

template <typename T>
void PoolBackEnd<T>::build(int feature_dim, Rng& rng) {
  dim_ = feature_dim;
  head_ = Linear<T>("head", embedding_dim(), 2);
  head_.init(rng, 1.0);
}

template <typename T>
std::vector<NamedParam<T>> PoolBackEnd<T>::parameters() {
  std::vector<NamedParam<T>> out;
  head_.collect(out);
  return out;
}

template <typename T>
BackEndOutput<T> PoolBackEnd<T>::forward(const Tensor<T>& features) {
  check_features(features, dim_, "pool");
  features_ = features;
  const std::size_t b = features.dim(0), t = features.dim(1), d = dim_;
  mean_ = time_mean(features);
  embedding_ = Tensor<T>({b, static_cast<std::size_t>(embedding_dim())});
  if (with_std_) std_ = Tensor<T>({b, d});
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      embedding_.data[i * embedding_dim() + k] = mean_.data[i * d + k];
      if (!with_std_) continue;
      const T mu = mean_.data[i * d + k];
      T var = T(0);
      for (std::size_t ti = 0; ti < t; ++ti) {
        const T c = features.data[(i * t + ti) * d + k] - mu;
        var += c * c;
      }
      var /= static_cast<T>(t);
      const T s = std::sqrt(var);
      std_.data[i * d + k] = s;
      embedding_.data[i * embedding_dim() + d + k] = s;
    }
  }
  BackEndOutput<T> out;
  out.logits = head_.forward(embedding_);
  out.embedding = embedding_;
  return out;
}

template <typename T>
Tensor<T> PoolBackEnd<T>::backward(const Tensor<T>& grad_embedding, const Tensor<T>& grad_logits) {
  Tensor<T> g = head_.backward(embedding_, grad_logits);
  for (std::size_t k = 0; k < g.size(); ++k) g.data[k] += grad_embedding.data[k];
  const std::size_t b = features_.dim(0), t = features_.dim(1), d = dim_;
  const std::size_t e = embedding_dim();
  Tensor<T> dmean({b, d});
  Tensor<T> dx(features_.shape);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t k = 0; k < d; ++k) dmean.data[i * d + k] = g.data[i * e + k];
  }
  if (with_std_) {
    // d std / dx_t = (x_t − μ) / (T·std); the μ-path cancels since Σ(x_t − μ) = 0.
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const T s = std_.data[i * d + k];
        if (s <= T(0)) continue;
        const T gs = g.data[i * e + d + k] / (static_cast<T>(t) * s);
        const T mu = mean_.data[i * d + k];
        for (std::size_t ti = 0; ti < t; ++ti) {
          const std::size_t idx = (i * t + ti) * d + k;
          dx.data[idx] += gs * (features_.data[idx] - mu);
        }
      }
    }
  }
  add_mean_grad(dx, dmean);
  return dx;
}

template class MlpBackEnd<float>;
template class MlpBackEnd<double>;
template class PoolBackEnd<float>;
template class PoolBackEnd<double>;

}  // namespace adf
