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

#include "adf/frontend.hpp"

#include <cmath>

#include "adf/error.hpp"

namespace adf {

template <typename T>
ReferenceFrontEnd<T>::ReferenceFrontEnd(const Params& params) {
  dim_ = static_cast<int>(params.at("dim").get<long long>());
  layers_ = static_cast<int>(params.at("layers").get<long long>());
  const int stem_channels = static_cast<int>(params.at("stem_channels").get<long long>());
  const auto ks = params.at("stem_kernels").get<std::vector<int>>();
  const auto ss = params.at("stem_strides").get<std::vector<int>>();
  const int block_kernel = static_cast<int>(params.at("block_kernel").get<long long>());
  act_ = parse_activation(params.at("activation").get<std::string>());
  if (dim_ < 1 || layers_ < 1 || stem_channels < 1) {
    throw ConfigError("reference frontend: dim, layers and stem_channels must be >= 1");
  }
  if (ks.empty() || ks.size() != ss.size()) {
    throw ConfigError("reference frontend: stem_kernels and stem_strides must be non-empty and equally long");
  }
  if (block_kernel < 1 || block_kernel % 2 == 0) {
    throw ConfigError("reference frontend: block_kernel must be odd");
  }
  int in = 1;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < ss[i] || ss[i] < 1) {
      throw ConfigError("reference frontend: each stem kernel must be >= its stride >= 1");
    }
    const int out = (i == 0 && ks.size() > 1) ? stem_channels : dim_;
    Conv c;
    c.geom = {in, out, ks[i], ss[i], (ks[i] - ss[i]) / 2, (ks[i] - ss[i]) - (ks[i] - ss[i]) / 2};
    c.weight = Param<T>("weight", {static_cast<std::size_t>(out), static_cast<std::size_t>(in),
                                   static_cast<std::size_t>(ks[i])});
    c.bias = Param<T>("bias", {static_cast<std::size_t>(out)});
    stem_.push_back(std::move(c));
    in = out;
  }
  for (int l = 0; l < layers_; ++l) {
    Conv c;
    c.geom = {dim_, dim_, block_kernel, 1, block_kernel / 2, block_kernel / 2};
    c.weight = Param<T>("weight", {static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_),
                                   static_cast<std::size_t>(block_kernel)});
    c.bias = Param<T>("bias", {static_cast<std::size_t>(dim_)});
    blocks_.push_back(std::move(c));
  }
}

template <typename T>
ParamSchema ReferenceFrontEnd<T>::schema() {
  return {{"dim", ParamType::integer, 64, "feature dimension D"},
          {"layers", ParamType::integer, 4, "number of emitted layers L"},
          {"stem_channels", ParamType::integer, 16, "width of the first stem conv"},
          {"stem_kernels", ParamType::int_list, std::vector<int>{16, 8, 5}, ""},
          {"stem_strides", ParamType::int_list, std::vector<int>{8, 8, 5}, "product is the total stride"},
          {"block_kernel", ParamType::integer, 3, "kernel of the length-preserving blocks"},
          {"activation", ParamType::string, "leaky_relu", ""}};
}

template <typename T>
int ReferenceFrontEnd<T>::frames(int samples) const {
  int n = samples;
  for (const auto& c : stem_) n = c.geom.out_len(n);
  return n;
}

template <typename T>
std::size_t ReferenceFrontEnd<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& c : stem_) n += c.weight.size() + c.bias.size();
  for (const auto& c : blocks_) n += c.weight.size() + c.bias.size();
  return n;
}

template <typename T>
void ReferenceFrontEnd<T>::build(Rng& rng) {
  auto init = [&](Conv& c, double gain) {
    const double fan_in = static_cast<double>(c.geom.in_channels) * c.geom.kernel;
    std::normal_distribution<double> n(0.0, gain * std::sqrt(2.0 / fan_in));
    for (auto& w : c.weight.value) w = static_cast<T>(n(rng));
    std::fill(c.bias.value.begin(), c.bias.value.end(), T(0));
  };
  for (auto& c : stem_) init(c, 1.0);
  for (auto& c : blocks_) init(c, 0.5);
}

template <typename T>
std::vector<NamedParam<T>> ReferenceFrontEnd<T>::parameters() {
  std::vector<NamedParam<T>> out;
  for (std::size_t i = 0; i < stem_.size(); ++i) {
    const std::string p = "stem" + std::to_string(i) + "/";
    out.push_back({p + "weight", &stem_[i].weight});
    out.push_back({p + "bias", &stem_[i].bias});
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = "block" + std::to_string(i) + "/";
    out.push_back({p + "weight", &blocks_[i].weight});
    out.push_back({p + "bias", &blocks_[i].bias});
  }
  return out;
}

template <typename T>
Tensor<T> ReferenceFrontEnd<T>::forward(const Tensor<T>& waves) {
  if (waves.rank() != 2) throw ConfigError("reference frontend: expected waveforms [batch, samples]");
  batch_ = static_cast<int>(waves.dim(0));
  const int samples = static_cast<int>(waves.dim(1));
  if (frames(samples) < 1) {
    throw ConfigError("reference frontend: " + std::to_string(samples) +
                      " samples is shorter than the total stride");
  }
  lens_.assign(1, samples);
  stem_in_.assign(stem_.size(), {});
  stem_pre_.assign(stem_.size(), {});
  block_in_.assign(blocks_.size(), {});
  block_pre_.assign(blocks_.size(), {});

  std::vector<T> h = waves.data;
  for (std::size_t i = 0; i < stem_.size(); ++i) {
    const auto& c = stem_[i];
    const int out_len = c.geom.out_len(lens_.back());
    std::vector<T> z(static_cast<std::size_t>(batch_) * c.geom.out_channels * out_len);
    kernels::conv1d_forward<T>(c.geom, batch_, lens_.back(), h, c.weight.value, c.bias.value, z);
    stem_in_[i] = std::move(h);
    h.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) h[k] = activate(act_, z[k]);
    stem_pre_[i] = std::move(z);
    lens_.push_back(out_len);
  }
  const std::size_t t = static_cast<std::size_t>(lens_.back());
  const std::size_t d = static_cast<std::size_t>(dim_);
  const std::size_t b = static_cast<std::size_t>(batch_);
  Tensor<T> features({static_cast<std::size_t>(layers_), b, t, d});
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const auto& c = blocks_[l];
    std::vector<T> z(h.size());
    kernels::conv1d_forward<T>(c.geom, batch_, static_cast<int>(t), h, c.weight.value,
                               c.bias.value, z);
    block_in_[l] = h;
    for (std::size_t k = 0; k < z.size(); ++k) h[k] += activate(act_, z[k]);
    block_pre_[l] = std::move(z);
    T* f = features.ptr() + l * b * t * d;
    for (std::size_t bi = 0; bi < b; ++bi) {
      for (std::size_t di = 0; di < d; ++di) {
        const T* src = h.data() + (bi * d + di) * t;
        for (std::size_t ti = 0; ti < t; ++ti) f[(bi * t + ti) * d + di] = src[ti];
      }
    }
  }
  return features;
}

template <typename T>
void ReferenceFrontEnd<T>::backward(const Tensor<T>& grad_features) {
  const std::size_t t = static_cast<std::size_t>(lens_.back());
  const std::size_t d = static_cast<std::size_t>(dim_);
  const std::size_t b = static_cast<std::size_t>(batch_);
  const std::size_t plane = b * d * t;
  if (grad_features.size() != static_cast<std::size_t>(layers_) * plane) {
    throw ConfigError("reference frontend: gradient shape does not match the last forward");
  }
  // Adds dF[l] (time-major) onto a channel-major gradient buffer.
  auto add_layer_grad = [&](std::vector<T>& dh, std::size_t l) {
    const T* g = grad_features.ptr() + l * plane;
    for (std::size_t bi = 0; bi < b; ++bi) {
      for (std::size_t ti = 0; ti < t; ++ti) {
        const T* row = g + (bi * t + ti) * d;
        for (std::size_t di = 0; di < d; ++di) dh[(bi * d + di) * t + ti] += row[di];
      }
    }
  };
  std::vector<T> dh(plane, T(0));
  std::vector<T> dz(plane), dx(plane);
  for (std::size_t l = blocks_.size(); l-- > 0;) {
    add_layer_grad(dh, l);
    auto& c = blocks_[l];
    const auto& z = block_pre_[l];
    for (std::size_t k = 0; k < plane; ++k) dz[k] = dh[k] * activate_grad(act_, z[k]);
    kernels::conv1d_backward<T>(c.geom, batch_, static_cast<int>(t), block_in_[l], c.weight.value,
                                dz, dx, c.weight.grad, c.bias.grad);
    for (std::size_t k = 0; k < plane; ++k) dh[k] += dx[k];
  }
  for (std::size_t i = stem_.size(); i-- > 0;) {
    auto& c = stem_[i];
    const auto& z = stem_pre_[i];
    std::vector<T> dzs(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) dzs[k] = dh[k] * activate_grad(act_, z[k]);
    std::vector<T> dprev(i == 0 ? 0 : stem_in_[i].size());
    kernels::conv1d_backward<T>(c.geom, batch_, lens_[i], stem_in_[i], c.weight.value, dzs,
                                dprev, c.weight.grad, c.bias.grad);
    dh = std::move(dprev);
  }
}

template class ReferenceFrontEnd<float>;
template class ReferenceFrontEnd<double>;

}  // namespace adf
