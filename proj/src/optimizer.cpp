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

#include "adf/optimizer.hpp"

#include <cmath>

#include "adf/error.hpp"

namespace adf {

template <typename T>
void Adam<T>::step(const std::vector<NamedParam<T>>& params) {
  for (const auto& p : params) {
    for (T g : p.param->grad) {
      if (!std::isfinite(g)) {
        throw NumericError("NonFiniteLoss: non-finite gradient in " + p.path);
      }
    }
  }
  ++t_;
  for (const auto& p : params) {
    auto& mom = moments_[p.path];
    if (mom.m.size() != p.param->size()) {
      mom.m.assign(p.param->size(), T(0));
      mom.v.assign(p.param->size(), T(0));
    }
    kernels::adam_update<T>(p.param->value, p.param->grad, mom.m, mom.v, hyper_, t_);
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace adf
