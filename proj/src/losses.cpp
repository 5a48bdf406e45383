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

#include "adf/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "adf/error.hpp"

namespace adf {

namespace {

template <typename T>
T softplus(T x) {
  return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}

template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

void check_labels(std::span<const int> labels, std::size_t batch, const char* who) {
  if (labels.size() != batch) {
    throw ConfigError(std::string(who) + ": label count does not match batch");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw DataError(std::string(who) + ": training requires labels (got " +
                      std::to_string(y) + ")");
    }
  }
}

template <typename T>
void check_finite(T v, const char* who) {
  if (!std::isfinite(v)) throw NumericError(std::string("NonFiniteLoss(") + who + ")");
}

// Two-class cross-entropy over z[b,2]; writes dL/dz of the mean loss.
template <typename T>
T softmax_xent(const Tensor<T>& z, std::span<const int> labels, Tensor<T>& grad) {
  const std::size_t b = z.dim(0);
  grad = Tensor<T>(z.shape);
  T total = T(0);
  for (std::size_t i = 0; i < b; ++i) {
    const T z0 = z.data[2 * i], z1 = z.data[2 * i + 1];
    const T mx = std::max(z0, z1);
    const T lse = mx + std::log(std::exp(z0 - mx) + std::exp(z1 - mx));
    const int y = labels[i];
    total += lse - z.data[2 * i + y];
    const T p1 = std::exp(z1 - lse);
    const T p0 = std::exp(z0 - lse);
    grad.data[2 * i] = (p0 - (y == 0 ? T(1) : T(0))) / static_cast<T>(b);
    grad.data[2 * i + 1] = (p1 - (y == 1 ? T(1) : T(0))) / static_cast<T>(b);
  }
  return total / static_cast<T>(b);
}

template <typename T>
std::vector<T> column(const Tensor<T>& m, std::size_t col) {
  const std::size_t b = m.dim(0), c = m.dim(1);
  std::vector<T> out(b);
  for (std::size_t i = 0; i < b; ++i) out[i] = m.data[i * c + col];
  return out;
}

}  // namespace

template <typename T>
CosineHead<T>::CosineHead(int classes, int dim)
    : centers("centers", {static_cast<std::size_t>(classes), static_cast<std::size_t>(dim)}),
      classes_(classes),
      dim_(dim) {}

template <typename T>
void CosineHead<T>::init(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  for (auto& v : centers.value) v = static_cast<T>(nd(rng));
}

template <typename T>
Tensor<T> CosineHead<T>::forward(const Tensor<T>& x) {
  if (x.rank() != 2 || x.dim(1) != static_cast<std::size_t>(dim_)) {
    throw ConfigError("loss: embedding width does not match the loss head");
  }
  const std::size_t b = x.dim(0), d = dim_, c = classes_;
  xhat_ = Tensor<T>(x.shape);
  xnorm_.assign(b, T(0));
  for (std::size_t i = 0; i < b; ++i) {
    T n = T(0);
    for (std::size_t k = 0; k < d; ++k) n += x.data[i * d + k] * x.data[i * d + k];
    n = std::sqrt(n);
    if (!(n > T(0)) || !std::isfinite(n)) {
      throw NumericError("ZeroNormEmbedding(row " + std::to_string(i) + ")");
    }
    xnorm_[i] = n;
    for (std::size_t k = 0; k < d; ++k) xhat_.data[i * d + k] = x.data[i * d + k] / n;
  }
  what_ = Tensor<T>({c, d});
  wnorm_.assign(c, T(0));
  for (std::size_t j = 0; j < c; ++j) {
    T n = T(0);
    for (std::size_t k = 0; k < d; ++k) n += centers.value[j * d + k] * centers.value[j * d + k];
    n = std::sqrt(n);
    if (!(n > T(0))) throw NumericError("ZeroNormCenter(" + std::to_string(j) + ")");
    wnorm_[j] = n;
    for (std::size_t k = 0; k < d; ++k) what_.data[j * d + k] = centers.value[j * d + k] / n;
  }
  cos_ = Tensor<T>({b, c});
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      T s = T(0);
      for (std::size_t k = 0; k < d; ++k) s += xhat_.data[i * d + k] * what_.data[j * d + k];
      cos_.data[i * c + j] = std::clamp(s, T(-1), T(1));
    }
  }
  return cos_;
}

template <typename T>
Tensor<T> CosineHead<T>::backward(const Tensor<T>& g) {
  const std::size_t b = xhat_.dim(0), d = dim_, c = classes_;
  Tensor<T> dx({b, d});
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const T gij = g.data[i * c + j];
      if (gij == T(0)) continue;
      const T cij = cos_.data[i * c + j];
      const T ax = gij / xnorm_[i];
      const T aw = gij / wnorm_[j];
      for (std::size_t k = 0; k < d; ++k) {
        const T xh = xhat_.data[i * d + k], wh = what_.data[j * d + k];
        dx.data[i * d + k] += ax * (wh - cij * xh);
        centers.grad[j * d + k] += aw * (xh - cij * wh);
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------

template <typename T>
CrossEntropyLoss<T>::CrossEntropyLoss(const Params&) {}

template <typename T>
ParamSchema CrossEntropyLoss<T>::schema() {
  return {};
}

template <typename T>
LossOutput<T> CrossEntropyLoss<T>::forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                                           std::span<const int> labels) {
  check_labels(labels, logits.dim(0), "ce");
  emb_shape_ = embedding.shape;
  LossOutput<T> out;
  out.loss = softmax_xent(logits, labels, grad_logits_);
  check_finite(out.loss, "ce");
  out.scores = scores(embedding, logits);
  return out;
}

template <typename T>
std::vector<T> CrossEntropyLoss<T>::scores(const Tensor<T>&, const Tensor<T>& logits) {
  const std::size_t b = logits.dim(0);
  std::vector<T> out(b);
  for (std::size_t i = 0; i < b; ++i) {
    const T z0 = logits.data[2 * i], z1 = logits.data[2 * i + 1];
    const T mx = std::max(z0, z1);
    out[i] = z1 - (mx + std::log(std::exp(z0 - mx) + std::exp(z1 - mx)));
  }
  return out;
}

template <typename T>
LossGrad<T> CrossEntropyLoss<T>::backward() {
  return {Tensor<T>(emb_shape_), grad_logits_};
}

// ---------------------------------------------------------------------------

template <typename T>
OcSoftmaxLoss<T>::OcSoftmaxLoss(const Params& p)
    : alpha_(p.at("alpha").get<T>()),
      m_real_(p.at("m_real").get<T>()),
      m_fake_(p.at("m_fake").get<T>()) {
  if (!(alpha_ > T(0))) throw ConfigError("ocsoftmax: alpha must be > 0");
}

template <typename T>
ParamSchema OcSoftmaxLoss<T>::schema() {
  return {{"alpha", ParamType::real, 20.0, "scale"},
          {"m_real", ParamType::real, 0.9, "bonafide margin"},
          {"m_fake", ParamType::real, 0.2, "spoof margin"}};
}

template <typename T>
void OcSoftmaxLoss<T>::build(int embedding_dim, Rng& rng) {
  head_ = CosineHead<T>(1, embedding_dim);
  head_.init(rng);
}

template <typename T>
std::vector<NamedParam<T>> OcSoftmaxLoss<T>::parameters() {
  return {{"center", &head_.centers}};
}

template <typename T>
LossOutput<T> OcSoftmaxLoss<T>::forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                                        std::span<const int> labels) {
  check_labels(labels, embedding.dim(0), "ocsoftmax");
  logit_shape_ = logits.shape;
  const Tensor<T> cos = head_.forward(embedding);
  const std::size_t b = embedding.dim(0);
  grad_cos_ = Tensor<T>({b, 1});
  LossOutput<T> out;
  out.scores.resize(b);
  T total = T(0);
  for (std::size_t i = 0; i < b; ++i) {
    const T c = cos.data[i];
    out.scores[i] = c;
    if (labels[i] == 1) {
      const T u = alpha_ * (m_real_ - c);
      total += softplus(u);
      grad_cos_.data[i] = -alpha_ * sigmoid(u) / static_cast<T>(b);
    } else {
      const T u = alpha_ * (c - m_fake_);
      total += softplus(u);
      grad_cos_.data[i] = alpha_ * sigmoid(u) / static_cast<T>(b);
    }
  }
  out.loss = total / static_cast<T>(b);
  check_finite(out.loss, "ocsoftmax");
  return out;
}

template <typename T>
std::vector<T> OcSoftmaxLoss<T>::scores(const Tensor<T>& embedding, const Tensor<T>&) {
  return head_.forward(embedding).data;
}

template <typename T>
LossGrad<T> OcSoftmaxLoss<T>::backward() {
  return {head_.backward(grad_cos_), Tensor<T>(logit_shape_)};
}

// ---------------------------------------------------------------------------

template <typename T>
AmSoftmaxLoss<T>::AmSoftmaxLoss(const Params& p)
    : s_(p.at("s").get<T>()), m_(p.at("m").get<T>()) {
  if (!(s_ > T(0))) throw ConfigError("amsoftmax: s must be > 0");
}

template <typename T>
ParamSchema AmSoftmaxLoss<T>::schema() {
  return {{"s", ParamType::real, 30.0, "scale"}, {"m", ParamType::real, 0.35, "additive margin"}};
}

template <typename T>
void AmSoftmaxLoss<T>::build(int embedding_dim, Rng& rng) {
  head_ = CosineHead<T>(2, embedding_dim);
  head_.init(rng);
}

template <typename T>
std::vector<NamedParam<T>> AmSoftmaxLoss<T>::parameters() {
  return {{"centers", &head_.centers}};
}

template <typename T>
LossOutput<T> AmSoftmaxLoss<T>::forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                                        std::span<const int> labels) {
  check_labels(labels, embedding.dim(0), "amsoftmax");
  logit_shape_ = logits.shape;
  const Tensor<T> cos = head_.forward(embedding);
  const std::size_t b = embedding.dim(0);
  Tensor<T> z(cos.shape);
  for (std::size_t i = 0; i < b; ++i) {
    for (int j = 0; j < 2; ++j) {
      const T c = cos.data[2 * i + j];
      z.data[2 * i + j] = s_ * (j == labels[i] ? c - m_ : c);
    }
  }
  LossOutput<T> out;
  out.loss = softmax_xent(z, labels, grad_cos_);
  for (auto& g : grad_cos_.data) g *= s_;
  check_finite(out.loss, "amsoftmax");
  out.scores = column(cos, 1);
  return out;
}

template <typename T>
std::vector<T> AmSoftmaxLoss<T>::scores(const Tensor<T>& embedding, const Tensor<T>&) {
  return column(head_.forward(embedding), 1);
}

template <typename T>
LossGrad<T> AmSoftmaxLoss<T>::backward() {
  return {head_.backward(grad_cos_), Tensor<T>(logit_shape_)};
}

// ---------------------------------------------------------------------------

template <typename T>
ASoftmaxLoss<T>::ASoftmaxLoss(const Params& p)
    : s_(p.at("s").get<T>()), m_(p.at("m").get<int>()) {
  if (!(s_ > T(0))) throw ConfigError("asoftmax: s must be > 0");
  if (m_ < 1) throw ConfigError("asoftmax: m must be >= 1");
}

template <typename T>
ParamSchema ASoftmaxLoss<T>::schema() {
  return {{"s", ParamType::real, 30.0, "scale"},
          {"m", ParamType::integer, 4, "angular margin multiplier"}};
}

template <typename T>
std::pair<T, T> ASoftmaxLoss<T>::psi(T c, int m) {
  c = std::clamp(c, T(-1), T(1));
  // Chebyshev T_m(c) and U_{m-1}(c) by recurrence.
  T t_prev = T(1), t_cur = c;
  T u_prev = T(0), u_cur = T(1);
  for (int n = 1; n < m; ++n) {
    const T t_next = T(2) * c * t_cur - t_prev;
    const T u_next = T(2) * c * u_cur - u_prev;
    t_prev = t_cur;
    t_cur = t_next;
    u_prev = u_cur;
    u_cur = u_next;
  }
  const T theta = std::acos(c);
  int k = static_cast<int>(std::floor(theta * static_cast<T>(m) / std::numbers::pi_v<T>));
  k = std::clamp(k, 0, m - 1);
  const T sign = (k % 2 == 0) ? T(1) : T(-1);
  return {sign * t_cur - T(2 * k), sign * static_cast<T>(m) * u_cur};
}

template <typename T>
void ASoftmaxLoss<T>::build(int embedding_dim, Rng& rng) {
  head_ = CosineHead<T>(2, embedding_dim);
  head_.init(rng);
}

template <typename T>
std::vector<NamedParam<T>> ASoftmaxLoss<T>::parameters() {
  return {{"centers", &head_.centers}};
}

template <typename T>
LossOutput<T> ASoftmaxLoss<T>::forward(const Tensor<T>& embedding, const Tensor<T>& logits,
                                       std::span<const int> labels) {
  check_labels(labels, embedding.dim(0), "asoftmax");
  logit_shape_ = logits.shape;
  const Tensor<T> cos = head_.forward(embedding);
  const std::size_t b = embedding.dim(0);
  Tensor<T> z(cos.shape);
  std::vector<T> dpsi(b);
  for (std::size_t i = 0; i < b; ++i) {
    for (int j = 0; j < 2; ++j) {
      const T c = cos.data[2 * i + j];
      if (j == labels[i]) {
        const auto [v, dv] = psi(c, m_);
        z.data[2 * i + j] = s_ * v;
        dpsi[i] = dv;
      } else {
        z.data[2 * i + j] = s_ * c;
      }
    }
  }
  LossOutput<T> out;
  out.loss = softmax_xent(z, labels, grad_cos_);
  for (std::size_t i = 0; i < b; ++i) {
    for (int j = 0; j < 2; ++j) {
      grad_cos_.data[2 * i + j] *= s_ * (j == labels[i] ? dpsi[i] : T(1));
    }
  }
  check_finite(out.loss, "asoftmax");
  out.scores = column(cos, 1);
  return out;
}

template <typename T>
std::vector<T> ASoftmaxLoss<T>::scores(const Tensor<T>& embedding, const Tensor<T>&) {
  return column(head_.forward(embedding), 1);
}

template <typename T>
LossGrad<T> ASoftmaxLoss<T>::backward() {
  return {head_.backward(grad_cos_), Tensor<T>(logit_shape_)};
}

template class CosineHead<float>;
template class CosineHead<double>;
template class CrossEntropyLoss<float>;
template class CrossEntropyLoss<double>;
template class OcSoftmaxLoss<float>;
template class OcSoftmaxLoss<double>;
template class AmSoftmaxLoss<float>;
template class AmSoftmaxLoss<double>;
template class ASoftmaxLoss<float>;
template class ASoftmaxLoss<double>;

}  // namespace adf
