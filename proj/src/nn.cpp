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

#include "adf/nn.hpp"

#include <cmath>
#include <numbers>

#include "adf/error.hpp"
#include "adf/kernels.hpp"

namespace adf {

template <typename T>
Linear<T>::Linear(std::string name, int in, int out)
    : weight("weight", {static_cast<std::size_t>(out), static_cast<std::size_t>(in)}),
      bias("bias", {static_cast<std::size_t>(out)}),
      name_(std::move(name)),
      in_(in),
      out_(out) {}

template <typename T>
void Linear<T>::init(Rng& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale / std::sqrt(static_cast<double>(in_)));
  for (auto& w : weight.value) w = static_cast<T>(n(rng));
  std::fill(bias.value.begin(), bias.value.end(), T(0));
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& x) const {
  const std::size_t b = x.dim(0);
  if (x.dim(1) != static_cast<std::size_t>(in_)) {
    throw ConfigError(name_ + ": expected input width " + std::to_string(in_) + ", got " +
                      std::to_string(x.dim(1)));
  }
  Tensor<T> y({b, static_cast<std::size_t>(out_)});
  kernels::gemm(kernels::Trans::no, kernels::Trans::yes, b, out_, in_, x.ptr(),
                weight.value.data(), T(0), y.ptr());
  for (std::size_t i = 0; i < b; ++i) {
    for (int j = 0; j < out_; ++j) y.data[i * out_ + j] += bias.value[j];
  }
  return y;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& x, const Tensor<T>& grad_y) {
  const std::size_t b = x.dim(0);
  kernels::gemm(kernels::Trans::yes, kernels::Trans::no, out_, in_, b, grad_y.ptr(), x.ptr(), T(1),
                weight.grad.data());
  for (std::size_t i = 0; i < b; ++i) {
    for (int j = 0; j < out_; ++j) bias.grad[j] += grad_y.data[i * out_ + j];
  }
  Tensor<T> dx({b, static_cast<std::size_t>(in_)});
  kernels::gemm(kernels::Trans::no, kernels::Trans::no, b, in_, out_, grad_y.ptr(),
                weight.value.data(), T(0), dx.ptr());
  return dx;
}

template <typename T>
void Linear<T>::collect(std::vector<NamedParam<T>>& out) {
  out.push_back({name_ + "/weight", &weight});
  out.push_back({name_ + "/bias", &bias});
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu") return Activation::leaky_relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "gelu") return Activation::gelu;
  throw ConfigError("unknown activation \"" + name + "\" (relu, leaky_relu, tanh, gelu)");
}

namespace {
constexpr double kLeak = 0.1;
const double kGeluC = std::sqrt(2.0 / std::numbers::pi);
}  // namespace

template <typename T>
T activate(Activation a, T x) {
  switch (a) {
    case Activation::relu: return x > T(0) ? x : T(0);
    case Activation::leaky_relu: return x > T(0) ? x : static_cast<T>(kLeak) * x;
    case Activation::tanh: return std::tanh(x);
    case Activation::gelu: {
      const T u = static_cast<T>(kGeluC) * (x + T(0.044715) * x * x * x);
      return T(0.5) * x * (T(1) + std::tanh(u));
    }
  }
  return x;
}

template <typename T>
T activate_grad(Activation a, T x) {
  switch (a) {
    case Activation::relu: return x > T(0) ? T(1) : T(0);
    case Activation::leaky_relu: return x > T(0) ? T(1) : static_cast<T>(kLeak);
    case Activation::tanh: {
      const T t = std::tanh(x);
      return T(1) - t * t;
    }
    case Activation::gelu: {
      const T c = static_cast<T>(kGeluC);
      const T u = c * (x + T(0.044715) * x * x * x);
      const T t = std::tanh(u);
      const T du = c * (T(1) + T(3) * T(0.044715) * x * x);
      return T(0.5) * (T(1) + t) + T(0.5) * x * (T(1) - t * t) * du;
    }
  }
  return T(1);
}

template <typename T>
Tensor<T> time_mean(const Tensor<T>& x) {
  const std::size_t b = x.dim(0), t = x.dim(1), d = x.dim(2);
  Tensor<T> out({b, d});
  for (std::size_t i = 0; i < b; ++i) {
    const T* base = x.ptr() + i * t * d;
    for (std::size_t k = 0; k < d; ++k) {
      // Shifted by the first frame so equal values average exactly.
      const T ref = base[k];
      T acc = T(0);
      for (std::size_t j = 0; j < t; ++j) acc += base[j * d + k] - ref;
      out.data[i * d + k] = ref + acc / static_cast<T>(t);
    }
  }
  return out;
}

template class Linear<float>;
template class Linear<double>;
template float activate<float>(Activation, float);
template double activate<double>(Activation, double);
template float activate_grad<float>(Activation, float);
template double activate_grad<double>(Activation, double);
template Tensor<float> time_mean<float>(const Tensor<float>&);
template Tensor<double> time_mean<double>(const Tensor<double>&);

}  // namespace adf
