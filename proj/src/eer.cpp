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

#include "adf/eer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adf/error.hpp"

namespace adf {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("eer: scores and labels differ in length");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw NumericError("eer: non-finite score at index " + std::to_string(i));
    if (labels[i] != 0 && labels[i] != 1) throw DataError("eer: labels must be 0 or 1");
  }
}

}  // namespace

EerResult compute_eer(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  const long long nb = std::count(labels.begin(), labels.end(), 1);
  const long long ns = static_cast<long long>(n) - nb;
  if (nb == 0 || ns == 0) throw DataError("SingleClass: EER needs bonafide and spoof scores");

  // Walk thresholds upward. At threshold t: cs = spoof with score >= t,
  // cb = bonafide with score < t. D = cs·nb − cb·ns has the sign of FAR − FRR.
  long long cs = ns, cb = 0;
  long long prev_cs = ns, prev_cb = 0;
  double prev_t = scores[idx.front()];
  std::size_t i = 0;
  while (true) {
    const bool sentinel = i >= n;
    const double t = sentinel ? std::numeric_limits<double>::infinity() : scores[idx[i]];
    const long long d = cs * nb - cb * ns;
    if (d == 0) return {static_cast<double>(cs) / ns, t};
    if (d < 0) {
      const double x1 = static_cast<double>(prev_cs) / ns, y1 = static_cast<double>(prev_cb) / nb;
      const double x2 = static_cast<double>(cs) / ns, y2 = static_cast<double>(cb) / nb;
      const double eer = (x1 * y2 - x2 * y1) / ((x1 - y1) - (x2 - y2));
      const double lambda = (x1 - y1) / ((x1 - y1) - (x2 - y2));
      const double thr = sentinel ? prev_t : prev_t + lambda * (t - prev_t);
      return {eer, thr};
    }
    prev_cs = cs;
    prev_cb = cb;
    prev_t = t;
    // Advance to the next unique score: everything equal to t drops below it.
    while (i < n && scores[idx[i]] == t) {
      if (labels[idx[i]] == 1) ++cb;
      else --cs;
      ++i;
    }
  }
}

ErrorRates rates_at(std::span<const double> scores, std::span<const int> labels, double t) {
  check_inputs(scores, labels);
  long long nb = 0, ns = 0, fa = 0, fr = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      ++nb;
      if (scores[i] < t) ++fr;
    } else {
      ++ns;
      if (scores[i] >= t) ++fa;
    }
  }
  ErrorRates r;
  r.far = ns ? static_cast<double>(fa) / ns : std::numeric_limits<double>::quiet_NaN();
  r.frr = nb ? static_cast<double>(fr) / nb : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace adf
