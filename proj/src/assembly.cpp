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

#include "adf/assembly.hpp"

#include "adf/error.hpp"

namespace adf {

namespace {

template <typename T>
void append(std::vector<NamedParam<T>>& out, const std::string& prefix,
            std::vector<NamedParam<T>> params) {
  for (auto& p : params) out.push_back({prefix + "/" + p.path, p.param});
}

}  // namespace

template <typename T>
ModelAssembly<T>::ModelAssembly(const ModelSpec& spec, const Registry& registry,
                                std::uint64_t seed)
    : spec_(spec) {
  frontend_ = registry.make_frontend<T>(spec.frontend.type, spec.frontend.params);
  frontend_->set_mode(spec.frontend_mode);
  backend_ = registry.make_backend<T>(spec.backend.type, spec.backend.params);
  loss_ = registry.make_loss<T>(spec.loss.type, spec.loss.params);

  Rng fe_rng = make_rng(seed, "model/frontend", 0, 0);
  frontend_->build(fe_rng);
  if (frontend_->layer_count() < 1) {
    throw ConfigError("frontend \"" + spec.frontend.type + "\": layer_count must be >= 1");
  }
  aggregator_ = std::make_unique<LayerAggregator<T>>(
      spec.aggregation, frontend_->layer_count(), frontend_->feature_dim(), spec.attention_hidden);
  Rng agg_rng = make_rng(seed, "model/aggregation", 0, 0);
  aggregator_->build(agg_rng);
  Rng be_rng = make_rng(seed, "model/backend", 0, 0);
  backend_->build(frontend_->feature_dim(), be_rng);
  Rng loss_rng = make_rng(seed, "model/loss", 0, 0);
  loss_->build(backend_->embedding_dim(), loss_rng);
}

template <typename T>
Tensor<T> ModelAssembly<T>::features(const Tensor<float>& waves) {
  if (waves.rank() != 2 || waves.dim(0) == 0) {
    throw DataError("model: expected a waveform batch [b, samples]");
  }
  Tensor<T> x(waves.shape);
  for (std::size_t i = 0; i < waves.size(); ++i) x.data[i] = static_cast<T>(waves.data[i]);
  Tensor<T> f = frontend_->forward(x);
  const std::size_t layers = frontend_->layer_count();
  if (f.rank() != 4 || f.dim(0) != layers || f.dim(1) != waves.dim(0) || f.dim(2) < 1 ||
      f.dim(3) != static_cast<std::size_t>(frontend_->feature_dim())) {
    throw ConfigError("frontend \"" + spec_.frontend.type +
                      "\": output is not [L, b, T>=1, D] for the declared L and D");
  }
  return aggregator_->forward(f);
}

template <typename T>
LossOutput<T> ModelAssembly<T>::forward(const Tensor<float>& waves, std::span<const int> labels) {
  const Tensor<T> agg = features(waves);
  const BackEndOutput<T> be = backend_->forward(agg);
  return loss_->forward(be.embedding, be.logits, labels);
}

template <typename T>
std::vector<T> ModelAssembly<T>::score(const Tensor<float>& waves) {
  const Tensor<T> agg = features(waves);
  const BackEndOutput<T> be = backend_->forward(agg);
  return loss_->scores(be.embedding, be.logits);
}

template <typename T>
void ModelAssembly<T>::backward() {
  const LossGrad<T> lg = loss_->backward();
  const Tensor<T> dagg = backend_->backward(lg.embedding, lg.logits);
  const Tensor<T> dfeat = aggregator_->backward(dagg);
  if (frontend_->mode() == FrontEndMode::finetune) frontend_->backward(dfeat);
}

template <typename T>
std::vector<NamedParam<T>> ModelAssembly<T>::parameters() {
  std::vector<NamedParam<T>> out;
  append(out, "frontend", frontend_->parameters());
  append(out, "aggregation", aggregator_->parameters());
  append(out, "backend", backend_->parameters());
  append(out, "loss", loss_->parameters());
  return out;
}

template <typename T>
std::vector<NamedParam<T>> ModelAssembly<T>::trainable() {
  std::vector<NamedParam<T>> out;
  if (frontend_->mode() == FrontEndMode::finetune) {
    append(out, "frontend", frontend_->parameters());
  }
  append(out, "aggregation", aggregator_->parameters());
  append(out, "backend", backend_->parameters());
  append(out, "loss", loss_->parameters());
  return out;
}

template <typename T>
void ModelAssembly<T>::zero_grad() {
  for (auto& p : parameters()) p.param->zero_grad();
}

template class ModelAssembly<float>;
template class ModelAssembly<double>;

}  // namespace adf
