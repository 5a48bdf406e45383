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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "adf/aggregation.hpp"
#include "adf/backends.hpp"
#include "adf/error.hpp"
#include "adf/frontend.hpp"
#include "adf/losses.hpp"
#include "grad_check.hpp"

using namespace adf;
using adf::testing::dot;
using adf::testing::numeric_grad;
using adf::testing::random_tensor;
using adf::testing::rel_error;

namespace {

template <typename B>
void check_backend_grads(B& be, Tensor<double> x, std::uint64_t seed) {
  const auto probe = be.forward(x);
  const auto ge = random_tensor(probe.embedding.shape, seed + 1);
  const auto gl = random_tensor(probe.logits.shape, seed + 2);
  auto objective = [&] {
    const auto out = be.forward(x);
    return dot(ge.data, out.embedding.data) + dot(gl.data, out.logits.data);
  };
  for (auto& p : be.parameters()) p.param->zero_grad();
  be.forward(x);
  const Tensor<double> dx = be.backward(ge, gl);
  for (auto& p : be.parameters()) {
    const auto num = numeric_grad(p.param->value, objective);
    INFO(p.path);
    CHECK(rel_error(p.param->grad, num) < 1e-4);
  }
  const auto num_x = numeric_grad(x.data, objective);
  CHECK(rel_error(dx.data, num_x) < 1e-4);
}

template <typename L>
void check_loss_grads(L& loss, Tensor<double> emb, Tensor<double> logits,
                      const std::vector<int>& labels) {
  auto objective = [&] { return loss.forward(emb, logits, labels).loss; };
  for (auto& p : loss.parameters()) p.param->zero_grad();
  loss.forward(emb, logits, labels);
  const auto g = loss.backward();
  for (auto& p : loss.parameters()) {
    const auto num = numeric_grad(p.param->value, objective);
    INFO(p.path);
    CHECK(rel_error(p.param->grad, num) < 1e-4);
  }
  CHECK(rel_error(g.embedding.data, numeric_grad(emb.data, objective)) < 1e-4);
  CHECK(rel_error(g.logits.data, numeric_grad(logits.data, objective)) < 1e-4);
}

double softplus_ref(double x) { return std::log(1.0 + std::exp(x)); }

std::vector<int> labels_for(std::size_t b) {
  std::vector<int> y(b);
  for (std::size_t i = 0; i < b; ++i) y[i] = static_cast<int>(i % 2);
  return y;
}

}  // namespace

TEST_SUITE("aggregation") {
  TEST_CASE("single layer passes through for every method") {
    for (auto m : {AggregationMethod::last, AggregationMethod::weighted_sum,
                   AggregationMethod::attentive}) {
      LayerAggregator<double> agg(m, 1, 5);
      Rng rng(3);
      agg.build(rng);
      const auto f = random_tensor({1, 2, 4, 5}, 11);
      const auto out = agg.forward(f);
      CHECK(out.data == f.data);
    }
  }

  TEST_CASE("uniform logits give the layer mean") {
    LayerAggregator<double> agg(AggregationMethod::weighted_sum, 4, 3);
    Rng rng(1);
    agg.build(rng);
    agg.logits.value = {0.7, 0.7, 0.7, 0.7};
    const auto f = random_tensor({4, 2, 3, 3}, 5);
    const auto out = agg.forward(f);
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double mean =
          (f.data[i] + f.data[n + i] + f.data[2 * n + i] + f.data[3 * n + i]) / 4.0;
      CHECK(out.data[i] == doctest::Approx(mean).epsilon(1e-12));
    }
  }

  TEST_CASE("saturated logits select layer 0") {
    LayerAggregator<double> agg(AggregationMethod::weighted_sum, 4, 3);
    Rng rng(1);
    agg.build(rng);
    agg.logits.value = {10, -10, -10, -10};
    const auto f = random_tensor({4, 2, 3, 3}, 6);
    const auto out = agg.forward(f);
    // Independent softmax evaluation.
    const double z = std::exp(10.0) + 3 * std::exp(-10.0);
    const double a0 = std::exp(10.0) / z, a1 = std::exp(-10.0) / z;
    const std::size_t n = out.size();
    double diff = 0, norm = 0, oracle_gap = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double expect =
          a0 * f.data[i] + a1 * (f.data[n + i] + f.data[2 * n + i] + f.data[3 * n + i]);
      oracle_gap = std::max(oracle_gap, std::abs(out.data[i] - expect));
      diff += (out.data[i] - f.data[i]) * (out.data[i] - f.data[i]);
      norm += f.data[i] * f.data[i];
    }
    CHECK(std::sqrt(diff / norm) < 1e-3);
    CHECK(oracle_gap < 1e-12);
  }

  TEST_CASE("mixing weights are a distribution") {
    for (auto m : {AggregationMethod::weighted_sum, AggregationMethod::attentive}) {
      LayerAggregator<double> agg(m, 4, 6, 8);
      Rng rng(9);
      agg.build(rng);
      if (m == AggregationMethod::weighted_sum) agg.logits.value = {0.3, -1.2, 2.0, 0.1};
      agg.forward(random_tensor({4, 3, 5, 6}, 2));
      const auto& w = agg.weights();
      REQUIRE(w.size() == 12);
      for (int i = 0; i < 3; ++i) {
        double s = 0;
        for (int l = 0; l < 4; ++l) {
          CHECK(w[i * 4 + l] >= 0.0);
          s += w[i * 4 + l];
        }
        CHECK(std::abs(s - 1.0) < 1e-6);
      }
    }
  }

  TEST_CASE("gradients match central differences") {
    for (auto m : {AggregationMethod::last, AggregationMethod::weighted_sum,
                   AggregationMethod::attentive}) {
      INFO(to_string(m));
      LayerAggregator<double> agg(m, 3, 4, 5);
      Rng rng(4);
      agg.build(rng);
      if (m == AggregationMethod::weighted_sum) agg.logits.value = {0.2, -0.4, 0.9};
      auto f = random_tensor({3, 2, 3, 4}, 21);
      const auto g = random_tensor({2, 3, 4}, 22);
      auto objective = [&] { return dot(g.data, agg.forward(f).data); };
      for (auto& p : agg.parameters()) p.param->zero_grad();
      agg.forward(f);
      const auto df = agg.backward(g);
      for (auto& p : agg.parameters()) {
        CHECK(rel_error(p.param->grad, numeric_grad(p.param->value, objective)) < 1e-4);
      }
      CHECK(rel_error(df.data, numeric_grad(f.data, objective)) < 1e-4);
    }
  }

  TEST_CASE("unknown method is rejected") {
    CHECK_THROWS_AS(parse_aggregation("median"), ConfigError);
  }
}

TEST_SUITE("backends") {
  TEST_CASE("mlp without hidden layers embeds the pooled features") {
    MlpBackEnd<double> be(Params{{"hidden", std::vector<int>{}}, {"activation", "relu"},
                                 {"pooling", "mean"}});
    Rng rng(1);
    be.build(6, rng);
    CHECK(be.embedding_dim() == 6);
    const auto x = random_tensor({2, 4, 6}, 3);
    const auto out = be.forward(x);
    const auto pooled = time_mean(x);
    CHECK(out.embedding.data == pooled.data);
    CHECK(out.logits.shape == std::vector<std::size_t>{2, 2});
  }

  TEST_CASE("constant-in-time features pool to the frame") {
    PoolBackEnd<double> mean(Params{{"stats", "mean"}});
    Rng rng(1);
    mean.build(3, rng);
    Tensor<double> x({1, 5, 3});
    for (std::size_t t = 0; t < 5; ++t) {
      x.data[t * 3] = 0.1;
      x.data[t * 3 + 1] = -2.7;
      x.data[t * 3 + 2] = 1.0 / 3.0;
    }
    CHECK(mean.forward(x).embedding.data == std::vector<double>{0.1, -2.7, 1.0 / 3.0});

    PoolBackEnd<double> ms(Params{{"stats", "mean+std"}});
    ms.build(3, rng);
    const auto e = ms.forward(x).embedding.data;
    REQUIRE(e.size() == 6);
    CHECK(e[3] == 0.0);
    CHECK(e[4] == 0.0);
    CHECK(e[5] == 0.0);
  }

  TEST_CASE("pool mean on a single frame is that frame") {
    PoolBackEnd<double> be(Params{{"stats", "mean"}});
    Rng rng(2);
    be.build(4, rng);
    const auto x = random_tensor({3, 1, 4}, 8);
    CHECK(be.forward(x).embedding.data == x.data);
  }

  TEST_CASE("mlp gradients") {
    MlpBackEnd<double> be(Params{{"hidden", std::vector<int>{7, 5}}, {"activation", "relu"},
                                 {"pooling", "mean"}});
    Rng rng(5);
    be.build(4, rng);
    check_backend_grads(be, random_tensor({3, 4, 4}, 31), 40);
  }

  TEST_CASE("pool gradients") {
    for (const char* stats : {"mean", "mean+std"}) {
      INFO(stats);
      PoolBackEnd<double> be(Params{{"stats", stats}});
      Rng rng(6);
      be.build(4, rng);
      check_backend_grads(be, random_tensor({3, 5, 4}, 32), 50);
    }
  }

  TEST_CASE("feature width mismatch names the backend") {
    PoolBackEnd<double> be(Params{{"stats", "mean"}});
    Rng rng(1);
    be.build(4, rng);
    try {
      be.forward(random_tensor({1, 2, 5}, 1));
      FAIL("expected a shape error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("pool") != std::string::npos);
    }
  }
}

TEST_SUITE("losses") {
  TEST_CASE("cross-entropy closed forms") {
    CrossEntropyLoss<double> ce(Params::object());
    Tensor<double> emb({1, 2});
    Tensor<double> z({1, 2});
    const std::vector<int> y0{0}, y1{1};
    CHECK(ce.forward(emb, z, y0).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ce.forward(emb, z, y1).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    z.data = {100, -100};
    CHECK(ce.forward(emb, z, y0).loss < 1e-60);
  }

  TEST_CASE("cross-entropy matches the direct formula") {
    CrossEntropyLoss<double> ce(Params::object());
    const auto z = random_tensor({8, 2}, 77, 3.0);
    const auto y = labels_for(8);
    const auto out = ce.forward(Tensor<double>({8, 3}), z, y);
    double ref = 0;
    for (int i = 0; i < 8; ++i) {
      const double p0 = std::exp(z.data[2 * i]), p1 = std::exp(z.data[2 * i + 1]);
      const double py = (y[i] == 1 ? p1 : p0) / (p0 + p1);
      ref -= std::log(py);
      CHECK(out.scores[i] == doctest::Approx(std::log(p1 / (p0 + p1))).epsilon(1e-12));
    }
    CHECK(std::abs(out.loss - ref / 8) < 1e-6);
  }

  TEST_CASE("ocsoftmax on the center direction") {
    OcSoftmaxLoss<double> oc(Params{{"alpha", 20.0}, {"m_real", 0.9}, {"m_fake", 0.2}});
    Rng rng(1);
    oc.build(3, rng);
    const auto c = oc.parameters()[0].param->value;
    Tensor<double> emb({1, 3});
    for (int k = 0; k < 3; ++k) emb.data[k] = 2.5 * c[k];
    const std::vector<int> y{1};
    const auto out = oc.forward(emb, Tensor<double>({1, 2}), y);
    CHECK(out.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.loss == doctest::Approx(softplus_ref(20.0 * (0.9 - 1.0))).epsilon(1e-9));
    CHECK(out.loss == doctest::Approx(0.1269).epsilon(1e-3));
  }

  TEST_CASE("cosine scores ignore positive scaling") {
    OcSoftmaxLoss<double> oc(Params{{"alpha", 20.0}, {"m_real", 0.9}, {"m_fake", 0.2}});
    AmSoftmaxLoss<double> am(Params{{"s", 30.0}, {"m", 0.35}});
    Rng rng(2);
    oc.build(4, rng);
    am.build(4, rng);
    auto emb = random_tensor({5, 4}, 9);
    const auto a = oc.scores(emb, {});
    const auto b = am.scores(emb, {});
    for (auto& v : emb.data) v *= 17.0;
    const auto a2 = oc.scores(emb, {});
    const auto b2 = am.scores(emb, {});
    for (int i = 0; i < 5; ++i) {
      CHECK(a2[i] == doctest::Approx(a[i]).epsilon(1e-12));
      CHECK(b2[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("zero-norm embedding is a numeric error") {
    OcSoftmaxLoss<double> oc(Params{{"alpha", 20.0}, {"m_real", 0.9}, {"m_fake", 0.2}});
    Rng rng(1);
    oc.build(3, rng);
    const std::vector<int> y{1};
    CHECK_THROWS_AS(oc.forward(Tensor<double>({1, 3}), Tensor<double>({1, 2}), y), NumericError);
  }

  TEST_CASE("margin-free reductions") {
    AmSoftmaxLoss<double> am(Params{{"s", 30.0}, {"m", 0.0}});
    ASoftmaxLoss<double> as(Params{{"s", 30.0}, {"m", 1}});
    Rng r1(3), r2(3);
    am.build(4, r1);
    as.build(4, r2);
    const auto emb = random_tensor({6, 4}, 12);
    const auto y = labels_for(6);
    // Normalized-softmax cross-entropy evaluated directly.
    const auto& w = am.parameters()[0].param->value;
    double ref = 0;
    for (int i = 0; i < 6; ++i) {
      double cos[2];
      double xn = 0;
      for (int k = 0; k < 4; ++k) xn += emb.data[i * 4 + k] * emb.data[i * 4 + k];
      for (int j = 0; j < 2; ++j) {
        double d = 0, wn = 0;
        for (int k = 0; k < 4; ++k) {
          d += emb.data[i * 4 + k] * w[j * 4 + k];
          wn += w[j * 4 + k] * w[j * 4 + k];
        }
        cos[j] = d / std::sqrt(xn * wn);
      }
      const double e0 = std::exp(30 * cos[0]), e1 = std::exp(30 * cos[1]);
      ref -= std::log((y[i] == 1 ? e1 : e0) / (e0 + e1));
    }
    ref /= 6;
    const Tensor<double> z({6, 2});
    CHECK(am.forward(emb, z, y).loss == doctest::Approx(ref).epsilon(1e-12));
    CHECK(as.forward(emb, z, y).loss == doctest::Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("psi is continuous and monotone in the angle") {
    for (int m : {1, 2, 3, 4}) {
      double prev = ASoftmaxLoss<double>::psi(1.0, m).first;
      CHECK(prev == doctest::Approx(1.0));
      for (int i = 1; i <= 2000; ++i) {
        const double theta = M_PI * i / 2000.0;
        const auto [v, dv] = ASoftmaxLoss<double>::psi(std::cos(theta), m);
        CHECK(v <= prev + 1e-9);
        CHECK(std::abs(v - prev) < 0.05 * m);
        const int k = std::min(static_cast<int>(theta * m / M_PI), m - 1);
        const double expect = (k % 2 ? -1.0 : 1.0) * std::cos(m * theta) - 2.0 * k;
        CHECK(v == doctest::Approx(expect).epsilon(1e-9));
        CHECK(std::isfinite(dv));
        prev = v;
      }
      CHECK(prev == doctest::Approx(-2.0 * m + 1.0));
    }
  }

  TEST_CASE("loss gradients") {
    const auto y = labels_for(6);
    const auto emb = random_tensor({6, 5}, 90);
    const auto z = random_tensor({6, 2}, 91);
    Rng rng(7);
    SUBCASE("ce") {
      CrossEntropyLoss<double> l(Params::object());
      check_loss_grads(l, emb, z, y);
    }
    SUBCASE("ocsoftmax") {
      OcSoftmaxLoss<double> l(Params{{"alpha", 20.0}, {"m_real", 0.9}, {"m_fake", 0.2}});
      l.build(5, rng);
      check_loss_grads(l, emb, z, y);
    }
    SUBCASE("amsoftmax") {
      AmSoftmaxLoss<double> l(Params{{"s", 30.0}, {"m", 0.35}});
      l.build(5, rng);
      check_loss_grads(l, emb, z, y);
    }
    SUBCASE("asoftmax") {
      ASoftmaxLoss<double> l(Params{{"s", 30.0}, {"m", 4}});
      l.build(5, rng);
      check_loss_grads(l, emb, z, y);
    }
  }

  TEST_CASE("unlabeled rows cannot train") {
    CrossEntropyLoss<double> ce(Params::object());
    const std::vector<int> y{-1};
    CHECK_THROWS_AS(ce.forward(Tensor<double>({1, 2}), Tensor<double>({1, 2}), y), DataError);
  }
}

TEST_SUITE("frontend") {
  Params defaults() {
    Params p;
    for (const auto& s : ReferenceFrontEnd<double>::schema()) p[s.key] = s.default_value;
    return p;
  }

  TEST_CASE("default geometry") {
    ReferenceFrontEnd<double> fe(defaults());
    CHECK(fe.layer_count() == 4);
    CHECK(fe.feature_dim() == 64);
    CHECK(fe.frames(64000) == 200);
    CHECK(fe.frames(16000) == 50);
    CHECK(fe.parameter_count() < 100000);
    std::size_t n = 0;
    Rng rng(1);
    fe.build(rng);
    for (const auto& p : fe.parameters()) n += p.param->size();
    CHECK(n == fe.parameter_count());
  }

  TEST_CASE("forward shape and determinism") {
    ReferenceFrontEnd<double> fe(defaults());
    Rng rng(2);
    fe.build(rng);
    const auto w = random_tensor({2, 3200}, 3, 0.3);
    const auto a = fe.forward(w);
    CHECK(a.shape == std::vector<std::size_t>{4, 2, 10, 64});
    CHECK(fe.forward(w).data == a.data);
  }

  TEST_CASE("gradients on a small encoder") {
    Params p = defaults();
    p["dim"] = 4;
    p["stem_channels"] = 3;
    p["stem_kernels"] = std::vector<int>{4, 3};
    p["stem_strides"] = std::vector<int>{2, 3};
    p["layers"] = 2;
    ReferenceFrontEnd<double> fe(p);
    Rng rng(4);
    fe.build(rng);
    auto w = random_tensor({2, 24}, 5, 0.5);
    const auto probe = fe.forward(w);
    CHECK(probe.shape == std::vector<std::size_t>{2, 2, 4, 4});
    const auto g = random_tensor(probe.shape, 6);
    auto objective = [&] { return dot(g.data, fe.forward(w).data); };
    for (auto& np : fe.parameters()) np.param->zero_grad();
    fe.forward(w);
    fe.backward(g);
    for (auto& np : fe.parameters()) {
      INFO(np.path);
      CHECK(rel_error(np.param->grad, numeric_grad(np.param->value, objective)) < 1e-4);
    }
  }
}
