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

#include "adf/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adf::kernels {

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

template <typename T>
void gemm_serial(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
                 const T* b, T beta, T* c, std::size_t row_begin, std::size_t row_end) {
  for (std::size_t i = row_begin; i < row_end; ++i) {
    T* crow = c + i * n;
    if (beta == T(0)) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = T(0);
    } else if (beta != T(1)) {
      for (std::size_t j = 0; j < n; ++j) crow[j] *= beta;
    }
  }
  if (ta == Trans::no && tb == Trans::no) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      T* crow = c + i * n;
      const T* arow = a + i * k;
      for (std::size_t p = 0; p < k; ++p) {
        const T aip = arow[p];
        if (aip == T(0)) continue;
        const T* brow = b + p * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
      }
    }
  } else if (ta == Trans::no && tb == Trans::yes) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      T* crow = c + i * n;
      const T* arow = a + i * k;
      for (std::size_t j = 0; j < n; ++j) {
        const T* brow = b + j * k;
        T acc = T(0);
#pragma omp simd reduction(+ : acc)
        for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
        crow[j] += acc;
      }
    }
  } else if (ta == Trans::yes && tb == Trans::no) {
    for (std::size_t p = 0; p < k; ++p) {
      const T* brow = b + p * n;
      for (std::size_t i = row_begin; i < row_end; ++i) {
        const T api = a[p * m + i];
        if (api == T(0)) continue;
        T* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += api * brow[j];
      }
    }
  } else {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        T acc = T(0);
        for (std::size_t p = 0; p < k; ++p) acc += a[p * m + i] * b[j * k + p];
        c[i * n + j] += acc;
      }
    }
  }
}

template <typename T>
void im2col(const Conv1dGeom& g, int in_len, int out_len, const T* x, T* col) {
  for (int ci = 0; ci < g.in_channels; ++ci) {
    const T* xc = x + static_cast<std::size_t>(ci) * in_len;
    for (int kk = 0; kk < g.kernel; ++kk) {
      T* row = col + (static_cast<std::size_t>(ci) * g.kernel + kk) * out_len;
      const int offset = kk - g.pad_left;
      for (int t = 0; t < out_len; ++t) {
        const int src = t * g.stride + offset;
        row[t] = (src >= 0 && src < in_len) ? xc[src] : T(0);
      }
    }
  }
}

template <typename T>
void col2im(const Conv1dGeom& g, int in_len, int out_len, const T* col, T* dx) {
  for (int ci = 0; ci < g.in_channels; ++ci) {
    T* xc = dx + static_cast<std::size_t>(ci) * in_len;
    for (int kk = 0; kk < g.kernel; ++kk) {
      const T* row = col + (static_cast<std::size_t>(ci) * g.kernel + kk) * out_len;
      const int offset = kk - g.pad_left;
      for (int t = 0; t < out_len; ++t) {
        const int src = t * g.stride + offset;
        if (src >= 0 && src < in_len) xc[src] += row[t];
      }
    }
  }
}

}  // namespace

template <typename T>
void gemm(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
          const T* b, T beta, T* c) {
  // Row blocks are independent; 16 rows per block keeps the B panel hot.
  const std::size_t block = 16;
  const long blocks = static_cast<long>((m + block - 1) / block);
#pragma omp parallel for schedule(static) if (m * n * k > (1u << 18))
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * block;
    const std::size_t hi = std::min(m, lo + block);
    gemm_serial(ta, tb, m, n, k, a, b, beta, c, lo, hi);
  }
}

template <typename T>
void conv1d_forward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                    std::span<const T> weight, std::span<const T> bias, std::span<T> output) {
  const int out_len = g.out_len(in_len);
  const std::size_t ck = static_cast<std::size_t>(g.in_channels) * g.kernel;
  const std::size_t in_stride = static_cast<std::size_t>(g.in_channels) * in_len;
  const std::size_t out_stride = static_cast<std::size_t>(g.out_channels) * out_len;
#pragma omp parallel
  {
    std::vector<T> col(ck * out_len);
#pragma omp for schedule(static)
    for (int bi = 0; bi < batch; ++bi) {
      im2col(g, in_len, out_len, input.data() + bi * in_stride, col.data());
      T* out = output.data() + bi * out_stride;
      gemm_serial(Trans::no, Trans::no, g.out_channels, out_len, ck, weight.data(), col.data(),
                  T(0), out, 0, g.out_channels);
      for (int co = 0; co < g.out_channels; ++co) {
        T* row = out + static_cast<std::size_t>(co) * out_len;
        const T bc = bias[co];
        for (int t = 0; t < out_len; ++t) row[t] += bc;
      }
    }
  }
}

template <typename T>
void conv1d_backward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                     std::span<const T> weight, std::span<const T> grad_output,
                     std::span<T> grad_input, std::span<T> grad_weight, std::span<T> grad_bias) {
  const int out_len = g.out_len(in_len);
  const std::size_t ck = static_cast<std::size_t>(g.in_channels) * g.kernel;
  const std::size_t wsize = g.weight_size();
  const std::size_t in_stride = static_cast<std::size_t>(g.in_channels) * in_len;
  const std::size_t out_stride = static_cast<std::size_t>(g.out_channels) * out_len;
  std::vector<T> partial_w(wsize * batch);
  std::vector<T> partial_b(static_cast<std::size_t>(g.out_channels) * batch);
  const bool want_input = !grad_input.empty();
#pragma omp parallel
  {
    std::vector<T> col(ck * out_len);
    std::vector<T> dcol(want_input ? ck * out_len : 0);
#pragma omp for schedule(static)
    for (int bi = 0; bi < batch; ++bi) {
      const T* go = grad_output.data() + bi * out_stride;
      im2col(g, in_len, out_len, input.data() + bi * in_stride, col.data());
      gemm_serial(Trans::no, Trans::yes, g.out_channels, ck, out_len, go, col.data(), T(0),
                  partial_w.data() + bi * wsize, 0, g.out_channels);
      T* pb = partial_b.data() + static_cast<std::size_t>(bi) * g.out_channels;
      for (int co = 0; co < g.out_channels; ++co) {
        const T* row = go + static_cast<std::size_t>(co) * out_len;
        T acc = T(0);
        for (int t = 0; t < out_len; ++t) acc += row[t];
        pb[co] = acc;
      }
      if (want_input) {
        gemm_serial(Trans::yes, Trans::no, ck, out_len, g.out_channels, weight.data(), go, T(0),
                    dcol.data(), 0, ck);
        T* dx = grad_input.data() + bi * in_stride;
        std::fill(dx, dx + in_stride, T(0));
        col2im(g, in_len, out_len, dcol.data(), dx);
      }
    }
  }
  for (int bi = 0; bi < batch; ++bi) {
    const T* pw = partial_w.data() + bi * wsize;
    for (std::size_t i = 0; i < wsize; ++i) grad_weight[i] += pw[i];
    const T* pb = partial_b.data() + static_cast<std::size_t>(bi) * g.out_channels;
    for (int co = 0; co < g.out_channels; ++co) grad_bias[co] += pb[co];
  }
}

template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 const AdamHyper& h, long step) {
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(step));
  const T alpha = static_cast<T>(h.lr * std::sqrt(bc2) / bc1);
  const T eps_hat = static_cast<T>(h.eps * std::sqrt(bc2));
  const T b1 = static_cast<T>(h.beta1);
  const T b2 = static_cast<T>(h.beta2);
  const T one_b1 = static_cast<T>(1.0 - h.beta1);
  const T one_b2 = static_cast<T>(1.0 - h.beta2);
  const long n = static_cast<long>(param.size());
#pragma omp parallel for simd schedule(static) if (n > 65536)
  for (long i = 0; i < n; ++i) {
    const T gi = grad[i];
    const T mi = b1 * m[i] + one_b1 * gi;
    const T vi = b2 * v[i] + one_b2 * gi * gi;
    m[i] = mi;
    v[i] = vi;
    param[i] -= alpha * mi / (std::sqrt(vi) + eps_hat);
  }
}

namespace reference {

template <typename T>
void gemm(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
          const T* b, T beta, T* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T acc = T(0);
      for (std::size_t p = 0; p < k; ++p) {
        const T av = ta == Trans::no ? a[i * k + p] : a[p * m + i];
        const T bv = tb == Trans::no ? b[p * n + j] : b[j * k + p];
        acc += av * bv;
      }
      c[i * n + j] = (beta == T(0) ? T(0) : beta * c[i * n + j]) + acc;
    }
  }
}

template <typename T>
void conv1d_forward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                    std::span<const T> weight, std::span<const T> bias, std::span<T> output) {
  const int out_len = g.out_len(in_len);
  for (int bi = 0; bi < batch; ++bi) {
    for (int co = 0; co < g.out_channels; ++co) {
      for (int t = 0; t < out_len; ++t) {
        T acc = bias[co];
        for (int ci = 0; ci < g.in_channels; ++ci) {
          for (int kk = 0; kk < g.kernel; ++kk) {
            const int src = t * g.stride + kk - g.pad_left;
            if (src < 0 || src >= in_len) continue;
            acc += weight[(static_cast<std::size_t>(co) * g.in_channels + ci) * g.kernel + kk] *
                   input[(static_cast<std::size_t>(bi) * g.in_channels + ci) * in_len + src];
          }
        }
        output[(static_cast<std::size_t>(bi) * g.out_channels + co) * out_len + t] = acc;
      }
    }
  }
}

template <typename T>
void conv1d_backward(const Conv1dGeom& g, int batch, int in_len, std::span<const T> input,
                     std::span<const T> weight, std::span<const T> grad_output,
                     std::span<T> grad_input, std::span<T> grad_weight, std::span<T> grad_bias) {
  const int out_len = g.out_len(in_len);
  if (!grad_input.empty()) std::fill(grad_input.begin(), grad_input.end(), T(0));
  for (int bi = 0; bi < batch; ++bi) {
    for (int co = 0; co < g.out_channels; ++co) {
      for (int t = 0; t < out_len; ++t) {
        const T go = grad_output[(static_cast<std::size_t>(bi) * g.out_channels + co) * out_len + t];
        grad_bias[co] += go;
        for (int ci = 0; ci < g.in_channels; ++ci) {
          for (int kk = 0; kk < g.kernel; ++kk) {
            const int src = t * g.stride + kk - g.pad_left;
            if (src < 0 || src >= in_len) continue;
            const std::size_t wi = (static_cast<std::size_t>(co) * g.in_channels + ci) * g.kernel + kk;
            const std::size_t xi = (static_cast<std::size_t>(bi) * g.in_channels + ci) * in_len + src;
            grad_weight[wi] += go * input[xi];
            if (!grad_input.empty()) grad_input[xi] += go * weight[wi];
          }
        }
      }
    }
  }
}

template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 const AdamHyper& h, long step) {
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double mi = h.beta1 * m[i] + (1.0 - h.beta1) * g;
    const double vi = h.beta2 * v[i] + (1.0 - h.beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    const double m_hat = mi / bc1;
    const double v_hat = vi / bc2;
    param[i] = static_cast<T>(param[i] - h.lr * m_hat / (std::sqrt(v_hat) + h.eps));
  }
}

}  // namespace reference

#define ADF_INSTANTIATE_KERNELS(T)                                                            \
  template void gemm<T>(Trans, Trans, std::size_t, std::size_t, std::size_t, const T*,        \
                        const T*, T, T*);                                                     \
  template void conv1d_forward<T>(const Conv1dGeom&, int, int, std::span<const T>,            \
                                  std::span<const T>, std::span<const T>, std::span<T>);      \
  template void conv1d_backward<T>(const Conv1dGeom&, int, int, std::span<const T>,           \
                                   std::span<const T>, std::span<const T>, std::span<T>,      \
                                   std::span<T>, std::span<T>);                               \
  template void adam_update<T>(std::span<T>, std::span<const T>, std::span<T>, std::span<T>,  \
                               const AdamHyper&, long);                                       \
  template void reference::gemm<T>(Trans, Trans, std::size_t, std::size_t, std::size_t,       \
                                   const T*, const T*, T, T*);                                \
  template void reference::conv1d_forward<T>(const Conv1dGeom&, int, int, std::span<const T>, \
                                             std::span<const T>, std::span<const T>,          \
                                             std::span<T>);                                   \
  template void reference::conv1d_backward<T>(const Conv1dGeom&, int, int,                    \
                                              std::span<const T>, std::span<const T>,         \
                                              std::span<const T>, std::span<T>, std::span<T>, \
                                              std::span<T>);                                  \
  template void reference::adam_update<T>(std::span<T>, std::span<const T>, std::span<T>,     \
                                          std::span<T>, const AdamHyper&, long);

ADF_INSTANTIATE_KERNELS(float)
ADF_INSTANTIATE_KERNELS(double)

#undef ADF_INSTANTIATE_KERNELS

}  // namespace adf::kernels
