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

#include <random>

#include "adf/config.hpp"
#include "adf/experiment.hpp"
#include "adf/yaml_io.hpp"
#include "fixtures.hpp"

using namespace adf;
using adf::testing::TempDir;
using adf::testing::write_file;
using nlohmann::json;

namespace {

const char* kMinimal = R"(exp_name: tiny
output_dir: runs
seed: 42
data:
  train:
    dataset: {type: synthetic, params: {count: 8, duration_s: 0.1}}
    transform: {duration_s: 0.1}
model:
  frontend: {type: reference}
  backend: {type: mlp}
  loss: {type: ce}
)";

ExperimentConfig parse(const std::string& text, const std::filesystem::path& base = "/tmp") {
  return load_config_text(text, Registry::global(), base);
}

std::string schema_path(const std::string& text) {
  try {
    parse(text);
  } catch (const SchemaError& e) {
    return e.key_path();
  } catch (const ConfigError& e) {
    return std::string("ConfigError: ") + e.what();
  }
  return "<accepted>";
}

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("yaml scalars follow the core schema; quoted stays string") {
  const json j = parse_yaml(
      "a: 1\nb: 1.5\nc: true\nd: null\ne: '1'\nf: \"x\"\ng: [1, two, 3.0]\nh: ~\ni: 0x10\nj: -2e-3\n"
      "k: .inf\nl: yes\n");
  CHECK(j["a"] == 1);
  CHECK(j["a"].is_number_integer());
  CHECK(j["b"] == 1.5);
  CHECK(j["c"] == true);
  CHECK(j["d"].is_null());
  CHECK(j["e"] == "1");
  CHECK(j["f"] == "x");
  CHECK(j["g"] == json::array({1, "two", 3.0}));
  CHECK(j["h"].is_null());
  CHECK(j["i"] == 16);
  CHECK(j["j"] == -2e-3);
  CHECK(std::isinf(j["k"].get<double>()));
  CHECK(j["l"] == "yes");  // YAML 1.2: not a boolean
}

TEST_CASE("yaml features outside the subset fail with a line number") {
  auto line_of = [](const std::string& text) {
    try {
      parse_yaml(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("a: 1\nb: &x 2\nc: *x\n") == 2);
  CHECK(line_of("a: 1\na: 2\n") == 2);
  CHECK(line_of("a: !!str 1\n") == 1);
  CHECK(line_of("a: 1\n---\nb: 2\n") > 0);
  CHECK(line_of("a: [1, 2\n") > 0);
  CHECK(line_of("a: 1\n  b: 2\n") > 0);
}

TEST_CASE("emitted yaml parses back to the same document") {
  nlohmann::ordered_json d;
  d["name"] = "x: y";
  d["n"] = 3;
  d["r"] = 0.1;
  d["whole"] = 2.0;
  d["flag"] = false;
  d["none"] = nullptr;
  d["list"] = {1, 2, 3};
  d["empty"] = nlohmann::ordered_json::array();
  d["obj"] = {{"k", "true"}, {"nested", {{"deep", -1.25e-7}}}};
  d["records"] = nlohmann::ordered_json::array({{{"type", "a"}, {"p", 0.5}}});
  const json back = parse_yaml(emit_yaml(d));
  CHECK(back == json::parse(d.dump()));
  CHECK(back["whole"].is_number_float());
  CHECK(back["obj"]["k"].is_string());
}

TEST_CASE("minimal config gets every default") {
  const ExperimentConfig c = parse(kMinimal);
  CHECK(c.exp_name == "tiny");
  CHECK(c.output_dir == "/tmp/runs");
  CHECK(c.seeds == std::vector<std::uint64_t>{42});
  CHECK(c.training.lr == 1e-6);
  CHECK(c.training.patience == 5);
  CHECK(c.training.val_interval == 0);
  CHECK(c.data.train->loader.batch_size == 32);
  CHECK(c.data.train->loader.shuffle == true);
  CHECK(c.data.train->loader.workers == 1);
  CHECK(c.data.train->transform.sample_rate == 16000);
  CHECK(c.model.backend.params.at("hidden") == json::array({128}));
  CHECK(c.model.frontend_mode == FrontEndMode::finetune);
  CHECK(system_id(c) == "reference-mlp-synthetic");
  const std::string y = to_yaml(c);
  CHECK(y.find("lr: 1e-06") != std::string::npos);
  CHECK(y.find("val_interval: \"epoch\"") != std::string::npos);
}

TEST_CASE("effective config archival is idempotent") {
  std::string rich = with("seed: 42", "seed: [2, 42, 240]");
  rich += R"(
training:
  lr: 0.001
  val_interval: 7
  patience: 2
  checkpoint: {keep_every: 2}
evaluation:
  test_sets:
    - dataset: {type: synthetic, params: {count: 4, seed: 5, name: a}}
    - dataset: {type: synthetic, params: {count: 4, seed: 6, name: b}}
  pooled_sets: [[a, b]]
  fairness: {attributes: [gender], quality_bands: {quantiles: 3}}
)";
  const ExperimentConfig c = parse(rich);
  const ExperimentConfig again = parse(to_yaml(c));
  CHECK(again == c);
  CHECK(to_yaml(again) == to_yaml(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c.for_seed(2)) != config_hash(c.for_seed(42)));
  CHECK(c.evaluation.test_sets[0].transform == c.data.train->transform);
}

TEST_CASE("schema errors carry the key path") {
  CHECK(schema_path(kMinimal + std::string("training: {lr: -1}\n")) == "training.lr");
  CHECK(schema_path(kMinimal + std::string("training: {lr: 0}\n")) == "training.lr");
  CHECK(schema_path(kMinimal + std::string("trainig: {lr: 1}\n")) == "trainig");
  CHECK(schema_path(kMinimal + std::string("training: {patience: 0}\n")) == "training.patience");
  CHECK(schema_path(kMinimal + std::string("training: {val_interval: 0}\n")) == "training.val_interval");
  CHECK(schema_path(kMinimal + std::string("training: {optimizer: sgd}\n")) == "training.optimizer");
  CHECK(schema_path(with("seed: 42", "seed: -3")) == "seed");
  CHECK(schema_path(with("{duration_s: 0.1}", "{duration_s: 0.1, normalise: true}")) ==
        "data.train.transform.normalise");
  CHECK(schema_path(with("{type: mlp}", "{type: mlp, params: {hiden: [4]}}")) ==
        "model.backend.params.hiden");
  CHECK(schema_path(with("{type: ce}", "{type: amsoftmax, params: {m: wide}}")) ==
        "model.loss.params.m");
  CHECK(schema_path(with("{type: reference}", "{type: reference, aggregation: mean}")) ==
        "model.frontend.aggregation");
  CHECK(schema_path(with("transform: {duration_s: 0.1}",
                         "transform: {duration_s: 0.1}\n    loader: {batch_size: 0}")) ==
        "data.train.loader.batch_size");
  CHECK(schema_path(with("exp_name: tiny", "exp_name: a/b")) == "exp_name");
}

TEST_CASE("unregistered component types fail with UnresolvableComponent") {
  try {
    parse(with("{type: mlp}", "{type: nes2net}"));
    FAIL("accepted an unregistered back-end");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("UnresolvableComponent(backend, \"nes2net\")") !=
          std::string::npos);
  }
  CHECK_THROWS_AS(parse(with("{type: synthetic", "{type: hdf5")), ConfigError);
}

TEST_CASE("relative paths resolve against the config directory") {
  TempDir dir("cfg");
  write_file(dir / "sub" / "c.yaml",
             with("{type: synthetic, params: {count: 8, duration_s: 0.1}}",
                  "{type: table, params: {path: data/t.csv}}"));
  write_file(dir / "sub" / "data" / "t.csv", "utt_id,audio_path,label\na,a.wav,spoof\n");
  const ExperimentConfig c = load_config(dir / "sub" / "c.yaml", Registry::global());
  CHECK(c.output_dir == dir.path() / "sub" / "runs");
  CHECK(c.data.train->dataset.params.at("path") == (dir.path() / "sub" / "data" / "t.csv").string());
  CHECK(system_id(c) == "reference-mlp-t");
}

TEST_CASE("system ids encode fields bijectively") {
  std::mt19937_64 rng(3);
  const std::string alphabet = "ab-_%.+/ Z9";
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> parts(3);
    for (auto& p : parts) {
      const int n = 1 + static_cast<int>(rng() % 6);
      for (int k = 0; k < n; ++k) p += alphabet[rng() % alphabet.size()];
    }
    const std::string id = encode_field(parts[0]) + "-" + encode_field(parts[1]) + "-" +
                           encode_field(parts[2]);
    CHECK(split_system_id(id) == parts);
  }
  CHECK_THROWS_AS(split_system_id("a-b"), ConfigError);
}

TEST_CASE("build_experiment creates one directory per seed and guards existing runs") {
  TempDir dir("exp");
  const auto cfg = load_config_text(with("seed: 42", "seed: [2, 240]"), Registry::global(), dir.path());
  const auto exps = build_experiment(cfg, Registry::global());
  REQUIRE(exps.size() == 2);
  CHECK(std::filesystem::exists(dir / "runs/tiny/seed_2/config.effective.yaml"));
  CHECK(std::filesystem::exists(dir / "runs/tiny/seed_240/config.effective.yaml"));
  CHECK(parse(adf::testing::read_file(dir / "runs/tiny/seed_2/config.effective.yaml")) ==
        cfg.for_seed(2));
  CHECK_THROWS_WITH_AS(build_experiment(cfg, Registry::global()), doctest::Contains("RunExists"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(build_experiment(cfg, Registry::global(), {false, true}),
                       doctest::Contains("nothing to resume"), ConfigError);
  CHECK_NOTHROW(build_experiment(cfg, Registry::global(), {true, false}));
  CHECK_THROWS_AS(build_experiment(cfg, Registry::global(), {true, true}), ConfigError);
}

TEST_CASE("data problems surface before any run directory is written") {
  TempDir dir("exp");
  write_file(dir / "t.csv", "utt_id,audio_path\na,a.wav\n");
  const auto cfg = load_config_text(
      with("{type: synthetic, params: {count: 8, duration_s: 0.1}}",
           "{type: table, params: {path: t.csv}}"),
      Registry::global(), dir.path());
  CHECK_THROWS_WITH_AS(build_experiment(cfg, Registry::global()),
                       doctest::Contains("MissingColumn(\"label\")"), DataError);
  CHECK_FALSE(std::filesystem::exists(dir / "runs"));

  write_file(dir / "t.csv", "utt_id,audio_path,label\nlost_1,missing.wav,spoof\n");
  CHECK_THROWS_WITH_AS(build_experiment(cfg, Registry::global()), doctest::Contains("lost_1"),
                       DataError);
  CHECK_FALSE(std::filesystem::exists(dir / "runs"));
}

TEST_CASE("same seed gives the same first-epoch order and initial parameters") {
  TempDir dir("exp");
  const auto cfg = load_config_text(kMinimal, Registry::global(), dir.path());
  const DataHandle a = build_data(cfg, Registry::global(), 42, true);
  const DataHandle b = build_data(cfg, Registry::global(), 42, true);
  CHECK(a.train_loader->order(0) == b.train_loader->order(0));
  auto ma = build_model(cfg, Registry::global(), 42);
  auto mb = build_model(cfg, Registry::global(), 42);
  const auto pa = std::get<0>(ma)->parameters();
  const auto pb = std::get<0>(mb)->parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].param->value == pb[i].param->value);
}

}  // TEST_SUITE
