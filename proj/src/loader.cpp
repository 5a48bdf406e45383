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

#include "adf/loader.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "adf/error.hpp"

namespace adf {

BatchLoader::BatchLoader(std::shared_ptr<const Dataset> dataset, TransformParams transform,
                         std::optional<AugmentationPolicy> policy, LoaderParams params,
                         std::uint64_t seed, bool training)
    : dataset_(std::move(dataset)),
      transform_(transform),
      policy_(std::move(policy)),
      params_(params),
      seed_(seed),
      training_(training) {
  if (!dataset_ || dataset_->records().empty()) throw DataError("loader needs at least one record");
  if (params_.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (params_.workers < 1) throw ConfigError("workers must be >= 1");
  if (policy_) policy_->validate();
}

std::size_t BatchLoader::num_batches() const noexcept {
  const std::size_t n = num_records();
  const std::size_t b = static_cast<std::size_t>(params_.batch_size);
  return (n + b - 1) / b;
}

std::vector<std::size_t> BatchLoader::order(std::size_t epoch) const {
  std::vector<std::size_t> idx(num_records());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (params_.shuffle) {
    Rng rng(derive_seed(seed_, "loader/shuffle", epoch));
    std::shuffle(idx.begin(), idx.end(), rng);
  }
  return idx;
}

std::vector<float> BatchLoader::prepare(std::size_t record_index, std::size_t epoch) const {
  const auto& rec = dataset_->records()[record_index];
  try {
    Waveform w = dataset_->load(rec);
    if (!training_) return transform(w.samples, w.sample_rate, transform_, nullptr);
    Rng rng(derive_seed(seed_, "loader/item", epoch, record_index));
    auto x = transform(w.samples, w.sample_rate, transform_, &rng);
    if (policy_) x = augment(x, transform_.sample_rate, *policy_, rng);
    return x;
  } catch (const Error& e) {
    throw DataError("utt_id " + rec.utt_id + ": " + e.what());
  } catch (const std::exception& e) {
    throw DataError("utt_id " + rec.utt_id + ": " + e.what());
  }
}

AudioBatch BatchLoader::batch(std::size_t epoch, std::size_t index) const {
  if (index >= num_batches()) throw DataError("batch index out of range");
  const auto ord = order(epoch);
  const std::size_t b = static_cast<std::size_t>(params_.batch_size);
  const std::size_t lo = index * b;
  const std::size_t hi = std::min(ord.size(), lo + b);
  const std::size_t count = hi - lo;
  const std::size_t samples = static_cast<std::size_t>(transform_.target_samples());

  AudioBatch out;
  out.waveforms = Tensor<float>({count, samples});
  out.labels.resize(count);
  out.utt_ids.resize(count);
  out.record_indices.assign(ord.begin() + static_cast<long>(lo), ord.begin() + static_cast<long>(hi));
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(params_.workers) if (params_.workers > 1)
  for (long i = 0; i < n; ++i) {
    try {
      auto x = prepare(out.record_indices[i], epoch);
      std::copy(x.begin(), x.end(), out.waveforms.ptr() + i * samples);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const auto& rec = dataset_->records()[out.record_indices[i]];
    out.utt_ids[i] = rec.utt_id;
    out.labels[i] = rec.label ? static_cast<int>(*rec.label) : -1;
  }
  return out;
}

BatchLoader make_loader(std::shared_ptr<const Dataset> dataset, const TransformParams& transform,
                        std::optional<AugmentationPolicy> policy, const LoaderParams& params,
                        std::uint64_t seed, bool training) {
  if (!training) policy.reset();
  return BatchLoader(std::move(dataset), transform, std::move(policy), params, seed, training);
}

}  // namespace adf
