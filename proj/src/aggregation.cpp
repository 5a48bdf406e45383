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

#include "adf/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "adf/error.hpp"

namespace adf {

std::string to_string(AggregationMethod m) {
  switch (m) {
    case AggregationMethod::last: return "last";
    case AggregationMethod::weighted_sum: return "weighted_sum";
    case AggregationMethod::attentive: return "attentive";
  }
  return "last";
}

AggregationMethod parse_aggregation(const std::string& name) {
  if (name == "last") return AggregationMethod::last;
  if (name == "weighted_sum") return AggregationMethod::weighted_sum;
  if (name == "attentive") return AggregationMethod::attentive;
  throw ConfigError("UnknownMethod(\"" + name + "\"): aggregation must be last, weighted_sum or attentive");
}

namespace {

template <typename T>
void softmax_inplace(T* x, std::size_t n) {
  T mx = x[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, x[i]);
  T sum = T(0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::exp(x[i] - mx);
    sum += x[i];
  }
  for (std::size_t i = 0; i < n; ++i) x[i] /= sum;
}

}  // namespace

template <typename T>
LayerAggregator<T>::LayerAggregator(AggregationMethod method, int layers, int dim,
                                    int attention_hidden)
    : method_(method), layers_(layers), dim_(dim), hidden_(attention_hidden) {
  if (layers < 1) throw ConfigError("aggregation needs L >= 1 layers");
  if (method_ == AggregationMethod::weighted_sum) {
    logits = Param<T>("weights", {static_cast<std::size_t>(layers)});
  } else if (method_ == AggregationMethod::attentive) {
    attn_proj = Param<T>("proj", {static_cast<std::size_t>(hidden_), static_cast<std::size_t>(dim)});
    attn_vector = Param<T>("vector", {static_cast<std::size_t>(hidden_)});
  }
}

template <typename T>
void LayerAggregator<T>::build(Rng& rng) {
  if (method_ != AggregationMethod::attentive) return;  // weighted_sum starts uniform
  std::normal_distribution<double> n(0.0, 1.0);
  const double sw = 1.0 / std::sqrt(static_cast<double>(dim_));
  const double sv = 1.0 / std::sqrt(static_cast<double>(hidden_));
  for (auto& w : attn_proj.value) w = static_cast<T>(sw * n(rng));
  for (auto& w : attn_vector.value) w = static_cast<T>(sv * n(rng));
}

template <typename T>
std::vector<NamedParam<T>> LayerAggregator<T>::parameters() {
  switch (method_) {
    case AggregationMethod::weighted_sum: return {{"weights", &logits}};
    case AggregationMethod::attentive: return {{"proj", &attn_proj}, {"vector", &attn_vector}};
    default: return {};
  }
}

template <typename T>
std::vector<T> LayerAggregator<T>::layer_weights() const {
  std::vector<T> w(layers_, T(0));
  if (method_ == AggregationMethod::weighted_sum) {
    w = logits.value;
    softmax_inplace(w.data(), w.size());
  } else if (method_ == AggregationMethod::last) {
    w.back() = T(1);
  } else if (!alpha_.empty()) {
    std::copy_n(alpha_.begin(), layers_, w.begin());
  }
  return w;
}

template <typename T>
Tensor<T> LayerAggregator<T>::forward(const Tensor<T>& features) {
  if (features.rank() != 4 || features.dim(0) != static_cast<std::size_t>(layers_) ||
      features.dim(3) != static_cast<std::size_t>(dim_)) {
    throw ConfigError("aggregation: expected features [" + std::to_string(layers_) +
                      ", b, T, " + std::to_string(dim_) + "]");
  }
  const std::size_t L = layers_, b = features.dim(1), t = features.dim(2), d = dim_;
  const std::size_t plane = b * t * d;
  features_ = features;
  alpha_.assign(b * L, T(0));
  if (method_ == AggregationMethod::last) {
    for (std::size_t i = 0; i < b; ++i) alpha_[i * L + L - 1] = T(1);
  } else if (method_ == AggregationMethod::weighted_sum) {
    const auto w = layer_weights();
    for (std::size_t i = 0; i < b; ++i) std::copy(w.begin(), w.end(), alpha_.begin() + i * L);
  } else {
    const std::size_t H = hidden_;
    pooled_ = Tensor<T>({L, b, d});
    hidden_act_.assign(b * L * H, T(0));
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t i = 0; i < b; ++i) {
        const T* f = features.ptr() + l * plane + i * t * d;
        T* m = pooled_.ptr() + (l * b + i) * d;
        for (std::size_t ti = 0; ti < t; ++ti) {
          for (std::size_t k = 0; k < d; ++k) m[k] += f[ti * d + k];
        }
        for (std::size_t k = 0; k < d; ++k) m[k] /= static_cast<T>(t);
        T score = T(0);
        for (std::size_t h = 0; h < H; ++h) {
          T u = T(0);
          const T* wrow = attn_proj.value.data() + h * d;
          for (std::size_t k = 0; k < d; ++k) u += wrow[k] * m[k];
          const T a = std::tanh(u);
          hidden_act_[(i * L + l) * H + h] = a;
          score += attn_vector.value[h] * a;
        }
        alpha_[i * L + l] = score;
      }
    }
    for (std::size_t i = 0; i < b; ++i) softmax_inplace(alpha_.data() + i * L, L);
  }
  if (method_ == AggregationMethod::last) {
    Tensor<T> out({b, t, d});
    std::copy_n(features.ptr() + (L - 1) * plane, plane, out.ptr());
    return out;
  }
  Tensor<T> out({b, t, d});
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i < b; ++i) {
      const T a = alpha_[i * L + l];
      const T* f = features.ptr() + l * plane + i * t * d;
      T* o = out.ptr() + i * t * d;
      for (std::size_t k = 0; k < t * d; ++k) o[k] += a * f[k];
    }
  }
  return out;
}

template <typename T>
Tensor<T> LayerAggregator<T>::backward(const Tensor<T>& grad_out) {
  const std::size_t L = layers_, b = features_.dim(1), t = features_.dim(2), d = dim_;
  const std::size_t plane = b * t * d;
  Tensor<T> grad(features_.shape);
  if (method_ == AggregationMethod::last) {
    std::copy_n(grad_out.ptr(), plane, grad.ptr() + (L - 1) * plane);
    return grad;
  }
  // dalpha[i, l] = <dOut[i], F_l[i]>
  std::vector<T> dalpha(b * L, T(0));
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i < b; ++i) {
      const T a = alpha_[i * L + l];
      const T* f = features_.ptr() + l * plane + i * t * d;
      const T* g = grad_out.ptr() + i * t * d;
      T* df = grad.ptr() + l * plane + i * t * d;
      T acc = T(0);
      for (std::size_t k = 0; k < t * d; ++k) {
        acc += g[k] * f[k];
        df[k] = a * g[k];
      }
      dalpha[i * L + l] = acc;
    }
  }
  // Softmax backward: ds = alpha ⊙ (dalpha − <alpha, dalpha>).
  std::vector<T> ds(b * L);
  for (std::size_t i = 0; i < b; ++i) {
    T dot = T(0);
    for (std::size_t l = 0; l < L; ++l) dot += alpha_[i * L + l] * dalpha[i * L + l];
    for (std::size_t l = 0; l < L; ++l) ds[i * L + l] = alpha_[i * L + l] * (dalpha[i * L + l] - dot);
  }
  if (method_ == AggregationMethod::weighted_sum) {
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t l = 0; l < L; ++l) logits.grad[l] += ds[i * L + l];
    }
    return grad;
  }
  const std::size_t H = hidden_;
  std::vector<T> du(H), dm(d);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t l = 0; l < L; ++l) {
      const T g = ds[i * L + l];
      const T* a = hidden_act_.data() + (i * L + l) * H;
      const T* m = pooled_.ptr() + (l * b + i) * d;
      for (std::size_t h = 0; h < H; ++h) {
        attn_vector.grad[h] += g * a[h];
        du[h] = g * attn_vector.value[h] * (T(1) - a[h] * a[h]);
      }
      std::fill(dm.begin(), dm.end(), T(0));
      for (std::size_t h = 0; h < H; ++h) {
        T* wg = attn_proj.grad.data() + h * d;
        const T* w = attn_proj.value.data() + h * d;
        for (std::size_t k = 0; k < d; ++k) {
          wg[k] += du[h] * m[k];
          dm[k] += du[h] * w[k];
        }
      }
      T* df = grad.ptr() + l * plane + i * t * d;
      const T inv_t = T(1) / static_cast<T>(t);
      for (std::size_t ti = 0; ti < t; ++ti) {
        for (std::size_t k = 0; k < d; ++k) df[ti * d + k] += dm[k] * inv_t;
      }
    }
  }
  return grad;
}

template class LayerAggregator<float>;
template class LayerAggregator<double>;

}  // namespace adf
