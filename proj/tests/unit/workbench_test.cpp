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

#include <fstream>
#include <map>
#include <sstream>

#include "adf/config.hpp"
#include "adf/error.hpp"
#include "adf/evaluator.hpp"
#include "adf/table_io.hpp"
#include "adf/workbench.hpp"
#include "fixtures.hpp"

using namespace adf;
using adf::testing::read_file;
using adf::testing::TempDir;
using adf::testing::write_file;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Planted EERs are dyadic so every mean in the aggregate is exact:
// v = (f + 2b + 4t + 8d + 1) / 64 + s / 256 with each index counted from 0.
double planted(int f, int b, int t, int d, int s) { return (f + 2 * b + 4 * t + 8 * d + 1) / 64.0 + s / 256.0; }

const std::vector<std::string> kF = {"fa", "fb"}, kB = {"ba", "bb"}, kT = {"ta", "tb"}, kD = {"d0", "d1", "d2"};
const std::vector<std::uint64_t> kSeeds = {2, 42};

std::string sys(int f, int b, int t) { return kF[f] + "-" + kB[b] + "-" + kT[t]; }

void plant_reports(const fs::path& root) {
  for (int f = 0; f < 2; ++f)
    for (int b = 0; b < 2; ++b)
      for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s) {
          SeedReport r;
          r.system_id = sys(f, b, t);
          r.seed = kSeeds[s];
          double sum = 0.0;
          for (int d = 0; d < 3; ++d) {
            const double v = planted(f, b, t, d, s);
            r.datasets.push_back({kD[d], 100, v, 0.0, ""});
            sum += v;
          }
          r.macro_eer = sum / 3.0;
          write_seed_report(root / r.system_id / seed_dir_name(r.seed) / "eval", r);
        }
}

// CSV keyed by the first `key_cols` columns joined with '|'.
std::map<std::string, std::vector<std::string>> keyed(const fs::path& p, std::size_t key_cols,
                                                      std::vector<std::string>* header = nullptr) {
  const StringTable t = read_csv(p);
  if (header) *header = t.columns;
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& row : t.rows) {
    std::string k;
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string v = row[i].value_or("");
      if (i < key_cols) k += (i ? "|" : "") + v;
      cells.push_back(v);
    }
    out[k] = cells;
  }
  return out;
}

double num(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_SUITE("workbench") {

TEST_CASE("planted reports aggregate to hand-computed tables") {
  TempDir root("wb");
  plant_reports(root.path());
  const AggregateResult agg = collect_reports(root.path());
  CHECK(agg.rows.size() == 8 * 2 * 3);
  CHECK(agg.frontends == kF);
  CHECK(agg.backends == kB);
  CHECK(agg.training_sets == kT);
  CHECK(agg.datasets == kD);
  CHECK(agg.seeds == kSeeds);
  write_aggregates(agg, root / "agg");

  std::vector<std::string> header;
  const auto longt = keyed(root / "agg/long.csv", 1, &header);
  CHECK(read_file(root / "agg/long.csv").rfind("system_id,frontend,backend,training_set,dataset,seed,eer\n", 0) == 0);
  const StringTable lt = read_csv(root / "agg/long.csv");
  REQUIRE(lt.rows.size() == 48);
  std::map<std::string, int> fi = {{"fa", 0}, {"fb", 1}}, bi = {{"ba", 0}, {"bb", 1}},
                             ti = {{"ta", 0}, {"tb", 1}}, di = {{"d0", 0}, {"d1", 1}, {"d2", 2}};
  for (const auto& row : lt.rows) {
    const int f = fi.at(*row[1]), b = bi.at(*row[2]), t = ti.at(*row[3]), d = di.at(*row[4]);
    const int s = *row[5] == "2" ? 0 : 1;
    CHECK(*row[0] == sys(f, b, t));
    CHECK(num(*row[6]) == planted(f, b, t, d, s));
  }

  // seed mean: the s/256 term averages to 1/512
  const auto sm = keyed(root / "agg/seed_mean.csv", 5, &header);
  CHECK(header == std::vector<std::string>{"system_id", "frontend", "backend", "training_set", "dataset",
                                           "n_seeds", "eer_mean", "eer_std"});
  CHECK(sm.size() == 24);
  for (int f = 0; f < 2; ++f)
    for (int b = 0; b < 2; ++b)
      for (int t = 0; t < 2; ++t)
        for (int d = 0; d < 3; ++d) {
          const auto& row = sm.at(sys(f, b, t) + "|" + kF[f] + "|" + kB[b] + "|" + kT[t] + "|" + kD[d]);
          CHECK(row[5] == "2");
          CHECK(num(row[6]) == (f + 2 * b + 4 * t + 8 * d + 1) / 64.0 + 1.0 / 512.0);
          CHECK(num(row[7]) == doctest::Approx(std::sqrt(2.0) / 512.0).epsilon(1e-12));
        }

  // heatmap: front-end x dataset, mean over back-ends and training sets
  const auto hm = keyed(root / "agg/heatmap.csv", 1, &header);
  CHECK(header == std::vector<std::string>{"frontend", "d0", "d1", "d2"});
  for (int f = 0; f < 2; ++f)
    for (int d = 0; d < 3; ++d) {
      CHECK(num(hm.at(kF[f])[1 + d]) == (f + 1 + 2 + 8 * d + 1) / 64.0 + 1.0 / 512.0);
    }

  // boxplot: system macro = mean over datasets (the 8d term averages to 8)
  const auto bp = keyed(root / "agg/boxplot.csv", 2);
  CHECK(bp.size() == 8);
  for (int f = 0; f < 2; ++f)
    for (int b = 0; b < 2; ++b)
      for (int t = 0; t < 2; ++t) {
        CHECK(num(bp.at(kF[f] + "|" + sys(f, b, t))[2]) == (f + 2 * b + 4 * t + 9) / 64.0 + 1.0 / 512.0);
      }

  // marginal: front-end x back-end over training sets, with mean row and column
  const auto mg = keyed(root / "agg/marginal.csv", 1, &header);
  CHECK(header == std::vector<std::string>{"frontend", "ba", "bb", "mean"});
  const double e = 1.0 / 512.0;
  for (int f = 0; f < 2; ++f) {
    for (int b = 0; b < 2; ++b) CHECK(num(mg.at(kF[f])[1 + b]) == (f + 2 * b + 2 + 9) / 64.0 + e);
    CHECK(num(mg.at(kF[f])[3]) == (f + 1 + 11) / 64.0 + e);
    CHECK(num(mg.at(kF[f])[3]) == (num(mg.at(kF[f])[1]) + num(mg.at(kF[f])[2])) / 2.0);
  }
  for (int b = 0; b < 2; ++b) CHECK(num(mg.at("mean")[1 + b]) == (0.5 + 2 * b + 11) / 64.0 + e);
  CHECK(num(mg.at("mean")[3]) == (0.5 + 1 + 11) / 64.0 + e);

  const json mm = json::parse(read_file(root / "agg/marginal_means.json"));
  CHECK(mm["frontend"]["fb"].get<double>() == (1 + 1 + 2 + 9) / 64.0 + e);
  CHECK(mm["backend"]["bb"].get<double>() == (0.5 + 2 + 2 + 9) / 64.0 + e);
  CHECK(mm["training_set"]["ta"].get<double>() == (0.5 + 1 + 0 + 9) / 64.0 + e);
  CHECK(mm["dataset"]["d2"].get<double>() == (0.5 + 1 + 2 + 16 + 1) / 64.0 + e);

  const auto ps = keyed(root / "agg/per_seed.csv", 5);
  CHECK(num(ps.at(sys(1, 1, 1) + "|fb|bb|tb|42")[5]) == (1 + 2 + 4 + 9) / 64.0 + 1.0 / 256.0);

  // aggregation is a pure function of the reports
  const std::string before = read_file(root / "agg/marginal.csv") + read_file(root / "agg/long.csv");
  fs::remove_all(root / "agg");
  write_aggregates(collect_reports(root.path()), root / "agg");
  CHECK(read_file(root / "agg/marginal.csv") + read_file(root / "agg/long.csv") == before);
}

TEST_CASE("a deleted cell raises IncompleteGrid naming it") {
  TempDir root("wb");
  plant_reports(root.path());
  fs::remove(root / sys(1, 0, 1) / "seed_42/eval/report.json");
  try {
    collect_reports(root.path());
    FAIL("incomplete grid accepted");
  } catch (const IncompleteGridError& e) {
    CHECK(std::string(e.what()).find("fb-ba-tb/seed_42/d0") != std::string::npos);
    CHECK(e.exit_code() == 5);
  }
}

TEST_CASE("a recorded grid catches a whole missing system") {
  TempDir root("wb");
  plant_reports(root.path());
  GridInfo g;
  g.name = "m";
  g.frontends = {"fa", "fb", "fc"};
  g.backends = kB;
  g.training_sets = kT;
  g.seeds = kSeeds;
  std::ofstream(root / "grid.json") << to_json(g).dump();
  CHECK_THROWS_WITH_AS(collect_reports(root.path()), doctest::Contains("fc-ba-ta"), IncompleteGridError);
}

TEST_CASE("duplicate reports are rejected") {
  TempDir root("wb");
  plant_reports(root.path());
  fs::create_directories(root / "copy");
  fs::copy(root / sys(0, 0, 0), root / "copy" / sys(0, 0, 0), fs::copy_options::recursive);
  CHECK_THROWS_WITH_AS(collect_reports(root.path()), doctest::Contains("duplicate"), DataError);
}

TEST_CASE("template binding keeps whole-scalar types and splices inside strings") {
  const json t = json::parse(R"({"a": "${frontend.dim}", "b": "x_${backend}_y", "c": ["${training_set}"],
                                 "d": "${frontend}"})");
  const json bound = bind_template(t, {{"frontend", json{{"name", "w"}, {"dim", 16}}},
                                       {"backend", json("mlp")},
                                       {"training_set", json("syn")}});
  CHECK(bound["a"] == 16);
  CHECK(bound["b"] == "x_mlp_y");
  CHECK(bound["c"] == json::array({"syn"}));
  CHECK(bound["d"]["dim"] == 16);
  CHECK_THROWS_AS(bind_template(json("${seedz}"), {}), ConfigError);
}

TEST_CASE("matrix expansion writes one config per cell and a grid record") {
  TempDir dir("wb");
  write_file(dir / "m.yaml", R"(name: grid
output_root: out
axes:
  frontend:
    - {name: small, type: reference, params: {dim: 8, layers: 1}}
    - {name: wide, type: reference, params: {dim: 16, layers: 1}}
  backend: [mlp, pool]
  training_set:
    - {name: synA, seed: 1}
  seed: [2, 42]
template:
  exp_name: placeholder
  data:
    train:
      dataset: {type: synthetic, params: {count: 8, duration_s: 0.1, seed: "${training_set.seed}", name: "${training_set.name}"}}
      transform: {duration_s: 0.1}
  model:
    frontend: {name: "${frontend.name}", type: "${frontend.type}", params: "${frontend.params}"}
    backend: {type: "${backend}"}
    loss: {type: ce}
  training: {lr: 0.001, max_epochs: 1}
)");
  const MatrixSpec spec = load_matrix(dir / "m.yaml");
  CHECK(spec.output_root == dir.path() / "out");
  const GridInfo g = expand_matrix(spec, Registry::global(), dir / "cfgs");
  REQUIRE(g.cells.size() == 4);
  std::vector<std::string> ids;
  for (const auto& c : g.cells) ids.push_back(c.system_id);
  CHECK(ids == std::vector<std::string>{"small-mlp-synA", "small-pool-synA", "wide-mlp-synA", "wide-pool-synA"});
  for (const auto& c : g.cells) {
    const ExperimentConfig cfg = load_config(c.config_path, Registry::global());
    CHECK(system_id(cfg) == c.system_id);
    CHECK(cfg.exp_name == c.system_id);
    CHECK(cfg.seeds == kSeeds);
    CHECK(c.run_root == dir.path() / "out" / "grid" / c.system_id);
  }
  const ExperimentConfig wide = load_config(g.cells[2].config_path, Registry::global());
  CHECK(wide.model.frontend.params.at("dim") == 16);
  CHECK(wide.data.train->dataset.params.at("seed") == 1);
  CHECK(fs::exists(dir / "cfgs/grid.json"));
  CHECK(grid_from_json(json::parse(read_file(dir / "out/grid/grid.json"))).cells.size() == 4);
}

TEST_CASE("matrix schema errors") {
  CHECK_THROWS_WITH_AS(parse_matrix(json::parse(R"({"axes": {"frontend": ["a"], "backend": ["b"]}, "template": {}})"), "/tmp"),
                       doctest::Contains("axes.training_set"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_matrix(json::parse(R"({"axes": {"frontend": ["a", "a"], "backend": ["b"], "training_set": ["t"]}, "template": {}})"), "/tmp"),
                       doctest::Contains("duplicate"), SchemaError);
  CHECK_THROWS_AS(parse_matrix(json::parse(R"({"axes": {"frontend": ["a"], "backend": ["b"], "training_set": ["t"], "lr": [1]}, "template": {}})"), "/tmp"),
                  SchemaError);
}

TEST_CASE("seed directory names round-trip") {
  for (std::uint64_t s : {0ull, 2ull, 42ull, 18446744073709551615ull}) CHECK(parse_seed_dir(seed_dir_name(s)) == s);
  CHECK_FALSE(parse_seed_dir("seed_"));
  CHECK_FALSE(parse_seed_dir("seed_01x"));
  CHECK_FALSE(parse_seed_dir("eval"));
}

}  // TEST_SUITE
