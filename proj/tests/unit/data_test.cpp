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
#include <complex>
#include <numbers>
#include <set>

#include "adf/audio.hpp"
#include "adf/augment.hpp"
#include "adf/datasets.hpp"
#include "adf/error.hpp"
#include "adf/loader.hpp"
#include "adf/metadata.hpp"
#include "adf/registry.hpp"
#include "adf/table_io.hpp"
#include "fixtures.hpp"

using namespace adf;
using adf::testing::TempDir;
using adf::testing::write_file;

namespace {

std::vector<float> ramp(std::size_t n) {
  std::vector<float> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<float>(i % 977) / 977.0f - 0.5f;
  return v;
}

AugmentItem noise_item(double prob, double snr = 20.0) {
  AugmentItem it;
  it.type = "additive_noise";
  it.params = Registry::global().validate(ComponentKind::augmentation, "additive_noise",
                                          {{"snr_db", snr}});
  it.prob = prob;
  it.impl = Registry::global().make_augmentation("additive_noise", it.params);
  return it;
}

// Identity augmentation that always succeeds, for selection-frequency tests.
class Marker : public Augmentation {
 public:
  explicit Marker(float v) : v_(v) {}
  std::vector<float> apply(std::span<const float> w, int, Rng&) const override {
    std::vector<float> out(w.begin(), w.end());
    out[0] = v_;
    return out;
  }

 private:
  float v_;
};

class Shrinker : public Augmentation {
 public:
  std::vector<float> apply(std::span<const float> w, int, Rng&) const override {
    return std::vector<float>(w.begin(), w.end() - 1);
  }
};

std::shared_ptr<const Dataset> synth(std::size_t n, double duration = 0.25) {
  SynthSpec s;
  s.count = n;
  s.duration_s = duration;
  s.seed = 3;
  return std::make_shared<SyntheticDataset>(s);
}

double dft_mag(const std::vector<float>& x, int rate, double f) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ph = -2.0 * std::numbers::pi * f * static_cast<double>(i) / rate;
    acc += static_cast<double>(x[i]) * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return std::abs(acc);
}

void put_le(std::string& s, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

TEST_SUITE("data_foundry") {

TEST_CASE("construct keeps file order and maps optional columns") {
  TempDir dir("meta");
  write_file(dir / "t.csv",
             "utt_id,audio_path,label,gender,language,pesq\n"
             "a,a.wav,bonafide,F,en,3.5\n"
             "b,b.wav,spoof,M,de,\n"
             "c,c.wav,spoof,,,1.25\n");
  const auto t = construct(dir / "t.csv");
  REQUIRE(t.records.size() == 3);
  CHECK(t.records[0].utt_id == "a");
  CHECK(t.records[1].utt_id == "b");
  CHECK(t.records[2].utt_id == "c");
  CHECK(t.records[0].label == Label::bonafide);
  CHECK(t.records[1].label == Label::spoof);
  CHECK(t.records[0].gender == Gender::female);
  CHECK(t.records[1].gender == Gender::male);
  CHECK_FALSE(t.records[2].gender.has_value());
  CHECK(t.records[1].language == "de");
  CHECK(t.records[0].pesq == 3.5);
  CHECK_FALSE(t.records[1].pesq.has_value());
  CHECK(t.records[0].dataset_name == "t");
}

TEST_CASE("construct errors name the problem") {
  TempDir dir("meta");
  write_file(dir / "nolabel.csv", "utt_id,audio_path\na,a.wav\n");
  CHECK_THROWS_WITH_AS(construct(dir / "nolabel.csv"), doctest::Contains("MissingColumn(\"label\")"),
                       DataError);
  ConstructOptions eval_only;
  eval_only.require_label = false;
  CHECK(construct(dir / "nolabel.csv", eval_only).has_labels == false);

  write_file(dir / "dup.csv", "utt_id,audio_path,label\na,a.wav,spoof\na,b.wav,spoof\n");
  CHECK_THROWS_WITH_AS(construct(dir / "dup.csv"), doctest::Contains("DuplicateUttId(\"a\")"),
                       DataError);
  write_file(dir / "empty.csv", "utt_id,audio_path,label\n");
  CHECK_THROWS_WITH_AS(construct(dir / "empty.csv"), doctest::Contains("EmptyTable"), DataError);
  write_file(dir / "nopath.csv", "utt_id,label\na,spoof\n");
  CHECK_THROWS_WITH_AS(construct(dir / "nopath.csv"), doctest::Contains("audio_path"), DataError);
  write_file(dir / "badlabel.csv", "utt_id,audio_path,label\na,a.wav,fake\n");
  CHECK_THROWS_AS(construct(dir / "badlabel.csv"), DataError);
}

TEST_CASE("utt_id is derived from the audio file stem when the column is absent") {
  TempDir dir("meta");
  write_file(dir / "t.csv", "audio_path,label\nwav/x_1.wav,spoof\nwav/x_2.wav,bonafide\n");
  const auto t = construct(dir / "t.csv");
  CHECK(t.records[0].utt_id == "x_1");
  CHECK(t.records[1].utt_id == "x_2");
}

TEST_CASE("metadata round-trips through CSV and Parquet") {
  TempDir dir("meta");
  std::vector<UtteranceRecord> recs(2);
  recs[0] = {"u1", "a.wav", Label::bonafide, Gender::female, "en", 2.75, 4.125, "t"};
  recs[1] = {"u2", "b,c.wav", Label::spoof, std::nullopt, std::nullopt, std::nullopt, 1.5, "t"};
  write_metadata(dir / "t.csv", recs);
  CHECK(construct(dir / "t.csv").records == recs);
  if (parquet_available()) {
    write_metadata(dir / "t.parquet", recs);
    CHECK(construct(dir / "t.parquet").records == recs);
  }
}

TEST_CASE("wav round trip and stereo downmix") {
  TempDir dir("wav");
  Waveform w;
  w.sample_rate = 8000;
  w.samples = {0.0f, 0.5f, -0.5f, 0.25f};
  write_wav(dir / "m.wav", w);
  const Waveform r = read_wav(dir / "m.wav");
  CHECK(r.sample_rate == 8000);
  REQUIRE(r.samples.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(r.samples[i] - w.samples[i]) < 1.0 / 32767);

  std::string s = "RIFF";
  const std::int16_t frames[][2] = {{16384, 0}, {-16384, -16384}};
  put_le(s, 36 + 8, 4);
  s += "WAVEfmt ";
  put_le(s, 16, 4);
  put_le(s, 1, 2);
  put_le(s, 2, 2);
  put_le(s, 16000, 4);
  put_le(s, 16000 * 4, 4);
  put_le(s, 4, 2);
  put_le(s, 16, 2);
  s += "data";
  put_le(s, 8, 4);
  for (const auto& f : frames) {
    put_le(s, static_cast<std::uint16_t>(f[0]), 2);
    put_le(s, static_cast<std::uint16_t>(f[1]), 2);
  }
  write_file(dir / "s.wav", s);
  const Waveform st = read_wav(dir / "s.wav");
  REQUIRE(st.samples.size() == 2);
  CHECK(st.samples[0] == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(st.samples[1] == doctest::Approx(-0.5).epsilon(1e-3));

  write_file(dir / "junk.wav", "not audio");
  CHECK_THROWS_AS(read_wav(dir / "junk.wav"), DataError);
}

TEST_CASE("transform: identity, repeat padding, leading crop") {
  TransformParams p;  // 4 s at 16 kHz
  REQUIRE(p.target_samples() == 64000);
  const auto x = ramp(64000);
  CHECK(transform(x, 16000, p) == x);

  const auto y = ramp(16000);
  const auto tiled = transform(y, 16000, p);
  REQUIRE(tiled.size() == 64000);
  for (std::size_t i = 0; i < 64000; ++i) REQUIRE(tiled[i] == y[i % 16000]);

  const auto odd = ramp(30000);
  const auto t2 = transform(odd, 16000, p);
  for (std::size_t i = 0; i < 64000; ++i) REQUIRE(t2[i] == odd[i % 30000]);

  const auto longer = ramp(80000);
  const auto cropped = transform(longer, 16000, p);
  CHECK(std::equal(cropped.begin(), cropped.end(), longer.begin()));

  Rng rng(7);
  std::set<long> starts;
  for (int k = 0; k < 20; ++k) {
    const auto c = transform(longer, 16000, p, &rng);
    REQUIRE(c.size() == 64000);
    const auto it = std::search(longer.begin(), longer.end(), c.begin(), c.begin() + 2000);
    starts.insert(static_cast<long>(it - longer.begin()));
  }
  CHECK(starts.size() > 1);
}

TEST_CASE("transform: zero padding, normalization and errors") {
  TransformParams p;
  p.duration_s = 1.0;
  p.pad_mode = PadMode::zeros;
  std::vector<float> x = {0.5f, -2.0f, 1.0f};
  auto z = transform(x, 16000, p);
  REQUIRE(z.size() == 16000);
  CHECK(z[2] == 1.0f);
  CHECK(z[3] == 0.0f);
  p.normalize = true;
  z = transform(x, 16000, p);
  float peak = 0;
  for (float v : z) peak = std::max(peak, std::abs(v));
  CHECK(peak == 1.0f);
  CHECK(z[1] == -1.0f);
  CHECK_THROWS_WITH_AS(transform(std::vector<float>{}, 16000, p), doctest::Contains("EmptyWaveform"),
                       DataError);
  CHECK_THROWS_WITH_AS(transform(x, 0, p), doctest::Contains("InvalidRate"), DataError);
}

TEST_CASE("resampling 8 kHz to 16 kHz keeps a 440 Hz tone within 1 Hz") {
  std::vector<float> x(8000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<float>(std::sin(2.0 * std::numbers::pi * 440.0 * static_cast<double>(i) / 8000.0));
  }
  TransformParams p;
  const auto y = transform(x, 8000, p);
  REQUIRE(y.size() == 64000);
  double best_f = 0, best = -1;
  for (double f = 430.0; f <= 450.0; f += 0.05) {
    const double m = dft_mag(y, 16000, f);
    if (m > best) {
      best = m;
      best_f = f;
    }
  }
  CHECK(std::abs(best_f - 440.0) < 1.0);
}

TEST_CASE("sequential augmentation: identity at prob 0, noise at prob 1") {
  AugmentationPolicy pol;
  pol.items = {noise_item(0.0), noise_item(0.0)};
  const auto x = ramp(4000);
  Rng rng(1);
  CHECK(augment(x, 16000, pol, rng) == x);
  pol.items = {noise_item(1.0)};
  const auto y = augment(x, 16000, pol, rng);
  CHECK(y.size() == x.size());
  CHECK(y != x);
}

TEST_CASE("sequential item applies at its probability") {
  AugmentationPolicy pol;
  pol.items = {noise_item(0.3)};
  const auto x = ramp(64);
  Rng rng(11);
  int hits = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    AugmentTrace tr;
    augment(x, 16000, pol, rng, &tr);
    hits += static_cast<int>(tr.applied.size());
  }
  const double rate = static_cast<double>(hits) / n;
  CHECK(std::abs(rate - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("parallel selection follows normalized probabilities") {
  AugmentationPolicy pol;
  pol.mode = AugmentMode::parallel;
  const std::vector<double> probs = {0.2, 0.5, 0.0, 0.3};
  for (std::size_t i = 0; i < probs.size(); ++i) {
    AugmentItem it;
    it.type = "marker";
    it.prob = probs[i];
    it.impl = std::make_shared<Marker>(static_cast<float>(i + 10));
    pol.items.push_back(it);
  }
  const auto x = ramp(16);
  Rng rng(5);
  std::vector<int> counts(probs.size(), 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    AugmentTrace tr;
    const auto y = augment(x, 16000, pol, rng, &tr);
    REQUIRE(tr.applied.size() == 1);
    CHECK(y[0] == static_cast<float>(tr.applied[0] + 10));
    ++counts[tr.applied[0]];
  }
  CHECK(counts[2] == 0);
  double chi2 = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0) continue;
    const double e = probs[i] * n;
    chi2 += (counts[i] - e) * (counts[i] - e) / e;
  }
  // chi-square, 2 degrees of freedom: P(X > 9.21) = 0.01
  CHECK(chi2 < 9.21);

  for (auto& it : pol.items) it.prob = 0.0;
  AugmentTrace tr;
  CHECK(augment(x, 16000, pol, rng, &tr) == x);
  CHECK(tr.applied.empty());
}

TEST_CASE("augmentation policy contract violations") {
  AugmentationPolicy pol;
  pol.mode = AugmentMode::parallel;
  CHECK_THROWS_AS(pol.validate(), ConfigError);
  pol.mode = AugmentMode::sequential;
  AugmentItem bad;
  bad.type = "shrink";
  bad.prob = 1.0;
  bad.impl = std::make_shared<Shrinker>();
  pol.items = {bad};
  Rng rng(1);
  CHECK_THROWS_WITH(augment(ramp(10), 16000, pol, rng), doctest::Contains("LengthChanged(\"shrink\")"));
  pol.items[0].prob = 1.5;
  CHECK_THROWS_AS(pol.validate(), ConfigError);
  CHECK_THROWS_AS(Registry::global().make_augmentation("rawboost", Params::object()), ConfigError);
}

TEST_CASE("loader batching, order and determinism") {
  TransformParams tp;
  tp.duration_s = 0.25;
  LoaderParams lp;
  lp.batch_size = 4;
  const auto ds = synth(10);
  BatchLoader plain(ds, tp, std::nullopt, lp, 42, false);
  REQUIRE(plain.num_batches() == 3);
  std::vector<std::size_t> sizes;
  std::vector<std::string> ids;
  for (std::size_t b = 0; b < 3; ++b) {
    const auto batch = plain.batch(0, b);
    sizes.push_back(batch.size());
    CHECK(batch.waveforms.shape == std::vector<std::size_t>{batch.size(), 4000});
    ids.insert(ids.end(), batch.utt_ids.begin(), batch.utt_ids.end());
  }
  CHECK(sizes == std::vector<std::size_t>{4, 4, 2});
  for (std::size_t i = 0; i < 10; ++i) CHECK(ids[i] == ds->records()[i].utt_id);

  lp.shuffle = true;
  BatchLoader a(ds, tp, std::nullopt, lp, 42, true), b(ds, tp, std::nullopt, lp, 42, true);
  CHECK(a.order(0) == b.order(0));
  CHECK(a.order(1) == b.order(1));
  CHECK(a.order(0) != a.order(1));
  BatchLoader c(ds, tp, std::nullopt, lp, 240, true), d(ds, tp, std::nullopt, lp, 2, true);
  CHECK(c.order(0) != d.order(0));
  CHECK(a.batch(1, 0).waveforms.data == b.batch(1, 0).waveforms.data);
}

TEST_CASE("loader output does not depend on the worker count") {
  TransformParams tp;
  tp.duration_s = 0.25;
  LoaderParams lp;
  lp.batch_size = 8;
  lp.shuffle = true;
  AugmentationPolicy pol;
  pol.items = {noise_item(0.5)};
  const auto ds = synth(20, 0.5);
  BatchLoader one(ds, tp, pol, lp, 42, true);
  lp.workers = 4;
  BatchLoader four(ds, tp, pol, lp, 42, true);
  for (std::size_t b = 0; b < one.num_batches(); ++b) {
    CHECK(one.batch(2, b).waveforms.data == four.batch(2, b).waveforms.data);
  }
}

TEST_CASE("evaluation loaders are augmentation-free and crop at the start") {
  TransformParams tp;
  tp.duration_s = 0.25;
  LoaderParams lp;
  const auto ds = synth(4, 0.5);
  BatchLoader eval(ds, tp, std::nullopt, lp, 1, false);
  const auto batch = eval.batch(0, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto full = ds->load(ds->records()[i]).samples;
    CHECK(std::equal(batch.waveforms.ptr() + i * 4000, batch.waveforms.ptr() + (i + 1) * 4000,
                     full.begin()));
  }
  CHECK(eval.batch(0, 0).waveforms.data == eval.batch(3, 0).waveforms.data);
}

TEST_CASE("synthetic corpus written to disk matches the in-memory dataset") {
  TempDir dir("synth");
  SynthSpec s;
  s.count = 6;
  s.duration_s = 0.1;
  s.seed = 9;
  const auto table = write_synthetic_corpus(s, dir.path());
  Params p = Registry::global().validate(ComponentKind::dataset, "table", {{"path", table.string()}});
  const auto disk = Registry::global().make_dataset("table", p);
  const SyntheticDataset mem(s);
  REQUIRE(disk->records().size() == 6);
  disk->check_sources();
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(disk->records()[i].label == mem.records()[i].label);
    const auto a = disk->load(disk->records()[i]).samples;
    const auto b = mem.load(mem.records()[i]).samples;
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(std::abs(a[k] - b[k]) <= 1.0f / 32767.0f);
  }
}

TEST_CASE("missing audio is reported with its utt_id") {
  TempDir dir("miss");
  write_file(dir / "t.csv", "utt_id,audio_path,label\nghost_7,nowhere.wav,spoof\n");
  Params p = Registry::global().validate(ComponentKind::dataset, "table",
                                         {{"path", (dir / "t.csv").string()}});
  const auto ds = Registry::global().make_dataset("table", p);
  CHECK_THROWS_WITH_AS(ds->check_sources(), doctest::Contains("ghost_7"), DataError);
}

}  // TEST_SUITE
