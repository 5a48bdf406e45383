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

#include "adf/augment.hpp"
#include "adf/backends.hpp"
#include "adf/datasets.hpp"
#include "adf/frontend.hpp"
#include "adf/losses.hpp"
#include "adf/registry.hpp"

namespace adf {

void register_builtins(Registry& r) {
  using K = ComponentKind;
  r.add(K::frontend, "reference", frontend_ctor<ReferenceFrontEnd>(),
        ReferenceFrontEnd<double>::schema());

  r.add(K::backend, "mlp", backend_ctor<MlpBackEnd>(), MlpBackEnd<double>::schema());
  r.add(K::backend, "pool", backend_ctor<PoolBackEnd>(), PoolBackEnd<double>::schema());

  r.add(K::loss, "ce", loss_ctor<CrossEntropyLoss>(), CrossEntropyLoss<double>::schema());
  r.add(K::loss, "ocsoftmax", loss_ctor<OcSoftmaxLoss>(), OcSoftmaxLoss<double>::schema());
  r.add(K::loss, "amsoftmax", loss_ctor<AmSoftmaxLoss>(), AmSoftmaxLoss<double>::schema());
  r.add(K::loss, "asoftmax", loss_ctor<ASoftmaxLoss>(), ASoftmaxLoss<double>::schema());

  r.add(K::augmentation, "additive_noise",
        AugmentationCtor{[](const Params& p) { return std::make_unique<AdditiveNoise>(p); }},
        AdditiveNoise::schema());

  r.add(K::dataset, "table",
        DatasetCtor{[](const Params& p) { return std::make_unique<TableDataset>(p); }},
        TableDataset::schema());
  r.add(K::dataset, "synthetic",
        DatasetCtor{[](const Params& p) { return std::make_unique<SyntheticDataset>(p); }},
        SyntheticDataset::schema());

  for (const char* n : {"aasist", "ecapa_tdnn", "rawnet2", "nes2net", "tcm", "bicrossmamba_st"}) {
    r.reserve(K::backend, n);
  }
  for (const char* n : {"wav2vec2", "wavlm", "hubert", "eat", "mert", "whisper", "beats"}) {
    r.reserve(K::frontend, n);
  }
  for (const char* n : {"rawboost", "rir", "codec"}) r.reserve(K::augmentation, n);
}

}  // namespace adf
