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

// Numeric kernels used by the engine and the optimizer. Each parallel kernel
// has a serial counterpart in `kernels::reference` that tests compare against.

#include <cstddef>
#include <span>

namespace adf::kernels {

/// Max threads the parallel kernels will use (1 when built without OpenMP).
int max_threads() noexcept;

enum class Trans { no, yes };

/// C[M×N] = beta·C + op(A)[M×K] · op(B)[K×N], row-major.
template <typename T>
void gemm(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
          const T* a, const T* b, T beta, T* c);

struct Conv1dGeom {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 1;
  int stride = 1;
  int pad_left = 0;
  int pad_right = 0;

  int out_len(int in_len) const noexcept {
    return (in_len + pad_left + pad_right - kernel) / stride + 1;
  }
  std::size_t weight_size() const noexcept {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel;
  }
};

/// Batched 1-D convolution. input [B, Cin, Tin], weight [Cout, Cin, K],
/// bias [Cout], output [B, Cout, Tout]. Parallel over the batch.
template <typename T>
void conv1d_forward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                    std::span<const T> weight, std::span<const T> bias, std::span<T> output);

/// Accumulates weight/bias gradients and (if grad_input is non-empty)
/// overwrites grad_input. Per-example weight partials are reduced in
/// example order so the result does not depend on the thread count.
template <typename T>
void conv1d_backward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                     std::span<const T> weight, std::span<const T> grad_output,
                     std::span<T> grad_input, std::span<T> grad_weight, std::span<T> grad_bias);

struct AdamHyper {
  double lr = 1e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update; `step` is the 1-based step count after
/// incrementing. Uses the folded step-size form.
template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 const AdamHyper& h, long step);

namespace reference {

template <typename T>
void gemm(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
          const T* b, T beta, T* c);

template <typename T>
void conv1d_forward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                    std::span<const T> weight, std::span<const T> bias, std::span<T> output);

template <typename T>
void conv1d_backward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                     std::span<const T> weight, std::span<const T> grad_output,
                     std::span<T> grad_input, std::span<T> grad_weight, std::span<T> grad_bias);

/// Textbook form: explicit bias-corrected moments.
template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 const AdamHyper& h, long step);

}  // namespace reference
}  // namespace adf::kernels
