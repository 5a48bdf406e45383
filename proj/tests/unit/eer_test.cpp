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

#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "adf/eer.hpp"
#include "adf/error.hpp"
#include "eer_oracle.hpp"

using namespace adf;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<int> labels;
};

// Integer-valued scores on a small range force plenty of ties.
Instance random_instance(std::mt19937_64& rng, bool ties) {
  std::uniform_int_distribution<int> len(2, 200);
  Instance in;
  const int n = len(rng);
  const int range = ties ? 1 + static_cast<int>(rng() % 20) : 0;
  for (int i = 0; i < n; ++i) {
    in.labels.push_back(static_cast<int>(rng() % 2));
    if (ties) in.scores.push_back(static_cast<double>(rng() % (range + 1)));
    else in.scores.push_back(std::normal_distribution<double>(in.labels.back() * 0.7, 1.0)(rng));
  }
  in.labels[0] = 0;
  in.labels[1] = 1;
  return in;
}

}  // namespace

TEST_SUITE("eer") {

TEST_CASE("worked examples") {
  const std::vector<int> l4 = {1, 1, 0, 0};
  CHECK(compute_eer(std::vector<double>{2, 3, 0, 1}, l4).eer == 0.0);
  CHECK(compute_eer(std::vector<double>{0, 1, 0, 1}, l4).eer == 0.5);
  const auto third = compute_eer(std::vector<double>{0.8, 0.6, 0.4, 0.7, 0.3, 0.1},
                                 std::vector<int>{1, 1, 1, 0, 0, 0});
  CHECK(third.eer == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(testing::brute_force_eer(std::vector<double>{0.8, 0.6, 0.4, 0.7, 0.3, 0.1},
                                 std::vector<int>{1, 1, 1, 0, 0, 0}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("constant scores sit at one half") {
  const std::vector<double> s(10, 0.25);
  const std::vector<int> l = {0, 1, 0, 1, 0, 1, 0, 1, 1, 1};
  CHECK(compute_eer(s, l).eer == doctest::Approx(0.5));
}

TEST_CASE("threshold reproduces the error rates") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const Instance in = random_instance(rng, false);
    const EerResult r = compute_eer(in.scores, in.labels);
    // Continuous scores: the interpolated threshold lies between two swept
    // points, so the rates there bracket the EER.
    const ErrorRates at = rates_at(in.scores, in.labels, r.threshold);
    CHECK(std::min(at.far, at.frr) <= r.eer + 1e-12);
    CHECK(std::max(at.far, at.frr) >= r.eer - 1e-12);
  }
}

TEST_CASE("matches the brute-force oracle on random score sets") {
  std::mt19937_64 rng(20260101);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Instance in = random_instance(rng, k % 2 == 0);
    const double got = compute_eer(in.scores, in.labels).eer;
    const double want = testing::brute_force_eer(in.scores, in.labels);
    worst = std::max(worst, std::abs(got - want));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(worst <= 1e-12);
  CHECK(secs < 10.0);
}

TEST_CASE("monotone transforms and label swap leave the EER unchanged") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const Instance in = random_instance(rng, k % 2 == 0);
    const double base = compute_eer(in.scores, in.labels).eer;
    std::vector<double> cubed, negated;
    std::vector<int> swapped;
    for (std::size_t i = 0; i < in.scores.size(); ++i) {
      const double x = in.scores[i];
      cubed.push_back(x * x * x + 3.0 * x + 1.0);
      negated.push_back(-x);
      swapped.push_back(1 - in.labels[i]);
    }
    CHECK(compute_eer(cubed, in.labels).eer == base);
    CHECK(compute_eer(negated, swapped).eer == base);
  }
}

TEST_CASE("input errors") {
  CHECK_THROWS_WITH_AS(compute_eer(std::vector<double>{1, 2}, std::vector<int>{1, 1}),
                       doctest::Contains("SingleClass"), DataError);
  CHECK_THROWS_AS(compute_eer(std::vector<double>{1, NAN}, std::vector<int>{0, 1}), NumericError);
  CHECK_THROWS_AS(compute_eer(std::vector<double>{1}, std::vector<int>{0, 1}), DataError);
}

}  // TEST_SUITE
