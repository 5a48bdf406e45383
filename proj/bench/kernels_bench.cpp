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

// Parallel kernels against their serial references. Run with
// --benchmark_filter=<name> to narrow; OMP_NUM_THREADS sets the thread count.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "adf/eer.hpp"
#include "adf/kernels.hpp"

namespace k = adf::kernels;

namespace {

std::vector<float> randv(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> nd;
  std::vector<float> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

template <bool Reference>
void BM_gemm(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = randv(n * n, 1), b = randv(n * n, 2);
  std::vector<float> c(n * n);
  for (auto _ : st) {
    if constexpr (Reference) k::reference::gemm<float>(k::Trans::no, k::Trans::yes, n, n, n, a.data(), b.data(), 0.0f, c.data());
    else k::gemm<float>(k::Trans::no, k::Trans::yes, n, n, n, a.data(), b.data(), 0.0f, c.data());
    benchmark::DoNotOptimize(c.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(2 * n * n * n));
}
BENCHMARK(BM_gemm<false>)->Name("gemm/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_gemm<true>)->Name("gemm/reference")->Arg(64)->Arg(256);

// The reference front-end's first layer on a batch of 1 s clips.
k::Conv1dGeom stem() {
  k::Conv1dGeom g;
  g.in_channels = 1;
  g.out_channels = 16;
  g.kernel = 16;
  g.stride = 8;
  return g;
}

template <bool Reference>
void BM_conv_forward(benchmark::State& st) {
  const auto g = stem();
  const int batch = static_cast<int>(st.range(0)), len = 16000;
  const auto x = randv(static_cast<std::size_t>(batch) * len, 3);
  const auto w = randv(g.weight_size(), 4), bias = randv(g.out_channels, 5);
  std::vector<float> y(static_cast<std::size_t>(batch) * g.out_channels * g.out_len(len));
  for (auto _ : st) {
    if constexpr (Reference) k::reference::conv1d_forward<float>(g, batch, len, x, w, bias, y);
    else k::conv1d_forward<float>(g, batch, len, x, w, bias, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_conv_forward<false>)->Name("conv1d_forward/parallel")->Arg(8)->Arg(32);
BENCHMARK(BM_conv_forward<true>)->Name("conv1d_forward/reference")->Arg(8)->Arg(32);

template <bool Reference>
void BM_conv_backward(benchmark::State& st) {
  const auto g = stem();
  const int batch = static_cast<int>(st.range(0)), len = 16000;
  const auto x = randv(static_cast<std::size_t>(batch) * len, 3);
  const auto w = randv(g.weight_size(), 4);
  const auto gy = randv(static_cast<std::size_t>(batch) * g.out_channels * g.out_len(len), 6);
  std::vector<float> gx(x.size()), gw(w.size()), gb(static_cast<std::size_t>(g.out_channels));
  for (auto _ : st) {
    if constexpr (Reference) k::reference::conv1d_backward<float>(g, batch, len, x, w, gy, gx, gw, gb);
    else k::conv1d_backward<float>(g, batch, len, x, w, gy, gx, gw, gb);
    benchmark::DoNotOptimize(gw.data());
  }
}
BENCHMARK(BM_conv_backward<false>)->Name("conv1d_backward/parallel")->Arg(8)->Arg(32);
BENCHMARK(BM_conv_backward<true>)->Name("conv1d_backward/reference")->Arg(8)->Arg(32);

template <bool Reference>
void BM_adam(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto p = randv(n, 7), m = randv(n, 8), v = randv(n, 9);
  const auto g = randv(n, 10);
  for (auto& x : v) x = x * x;
  k::AdamHyper h;
  long step = 1;
  for (auto _ : st) {
    if constexpr (Reference) k::reference::adam_update<float>(p, g, m, v, h, step++);
    else k::adam_update<float>(p, g, m, v, h, step++);
    benchmark::DoNotOptimize(p.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_adam<false>)->Name("adam/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_adam<true>)->Name("adam/reference")->Arg(1 << 16)->Arg(1 << 20);

void BM_eer(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::vector<double> s(n);
  std::vector<int> l(n);
  for (std::size_t i = 0; i < n; ++i) {
    l[i] = static_cast<int>(i % 2);
    s[i] = nd(rng) + l[i];
  }
  for (auto _ : st) benchmark::DoNotOptimize(adf::compute_eer(s, l));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_eer)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
