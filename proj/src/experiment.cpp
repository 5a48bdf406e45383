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

#include "adf/experiment.hpp"

#include <fstream>
#include <set>

#include "adf/error.hpp"

namespace adf {

namespace fs = std::filesystem;

namespace {

bool non_empty_dir(const fs::path& p) {
  return fs::is_directory(p) && fs::directory_iterator(p) != fs::directory_iterator();
}

}  // namespace

std::shared_ptr<const Dataset> make_split(const SplitSpec& s, const Registry& registry,
                                          const std::string& where, bool need_labels) {
  std::shared_ptr<const Dataset> ds;
  try {
    ds = registry.make_dataset(s.dataset.type, s.dataset.params);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  if (ds->records().empty()) throw DataError(where + ": EmptyTable");
  if (need_labels && !ds->has_labels()) throw DataError(where + ": MissingColumn(\"label\")");
  ds->check_sources();
  return ds;
}

fs::path run_dir_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  return cfg.output_dir / cfg.exp_name / ("seed_" + std::to_string(seed));
}

AugmentationPolicy make_policy(const AugmentSpec& spec, const Registry& registry) {
  AugmentationPolicy p;
  p.mode = spec.mode;
  for (const auto& item : spec.items) {
    AugmentItem it;
    it.type = item.type;
    it.params = item.params;
    it.prob = item.prob;
    it.impl = registry.make_augmentation(item.type, item.params);
    p.items.push_back(std::move(it));
  }
  p.validate();
  return p;
}

BatchLoader DataHandle::test_loader(std::size_t i, std::uint64_t seed) const {
  const auto& s = test_specs.at(i);
  return make_loader(tests.at(i), s.transform, std::nullopt, s.loader, seed, false);
}

DataHandle build_data(const ExperimentConfig& cfg, const Registry& registry, std::uint64_t seed,
                      bool need_train) {
  DataHandle h;
  if (need_train && !cfg.data.train) throw ConfigError("SchemaError(\"data.train\", required for training)");
  if (cfg.data.train) {
    const auto& s = *cfg.data.train;
    h.train = make_split(s, registry, "data.train", true);
    std::optional<AugmentationPolicy> policy;
    if (s.augment) policy = make_policy(*s.augment, registry);
    h.train_loader.emplace(make_loader(h.train, s.transform, policy, s.loader, seed, true));
  }
  if (cfg.data.valid) {
    const auto& s = *cfg.data.valid;
    h.valid = make_split(s, registry, "data.valid", true);
    h.valid_loader.emplace(make_loader(h.valid, s.transform, std::nullopt, s.loader, seed, false));
  }
  h.test_specs = cfg.test_splits();
  std::set<std::string> names;
  for (std::size_t i = 0; i < h.test_specs.size(); ++i) {
    const std::string where = "test set " + std::to_string(i);
    h.tests.push_back(make_split(h.test_specs[i], registry, where, false));
    if (!names.insert(h.tests.back()->name()).second) {
      throw ConfigError("two test sets share the dataset name \"" + h.tests.back()->name() + "\"");
    }
  }
  for (const auto& group : cfg.evaluation.pooled_sets) {
    for (const auto& n : group) {
      if (!names.contains(n)) {
        throw SchemaError("evaluation.pooled_sets", "\"" + n + "\" is not a test set name");
      }
    }
  }
  return h;
}

AnyModel build_model(const ExperimentConfig& cfg, const Registry& registry, std::uint64_t seed) {
  if (cfg.training.precision == Precision::float64) {
    return std::make_unique<ModelAssembly<double>>(cfg.model, registry, seed);
  }
  return std::make_unique<ModelAssembly<float>>(cfg.model, registry, seed);
}

CheckpointMeta make_meta(const ExperimentConfig& cfg) {
  CheckpointMeta m;
  m.config_yaml = to_yaml(cfg);
  m.config_hash = config_hash(cfg);
  m.system_id = system_id(cfg);
  m.seed = cfg.seeds.at(0);
  return m;
}

std::vector<Experiment> build_experiment(const ExperimentConfig& cfg, const Registry& registry,
                                         const RunOptions& options) {
  if (options.overwrite && options.resume) {
    throw ConfigError("--overwrite and --resume are mutually exclusive");
  }
  std::vector<Experiment> out;
  for (std::uint64_t seed : cfg.seeds) {
    Experiment e;
    e.cfg = cfg.for_seed(seed);
    e.seed = seed;
    e.run_dir = run_dir_for(cfg, seed);
    e.meta = make_meta(e.cfg);
    e.data = build_data(e.cfg, registry, seed, true);
    e.model = build_model(e.cfg, registry, seed);
    out.push_back(std::move(e));
  }
  // Directory policy is checked for every seed before any is touched.
  for (const auto& e : out) {
    const bool exists = non_empty_dir(e.run_dir);
    if (options.resume) {
      if (!fs::exists(e.run_dir / "checkpoints" / "last.ckpt")) {
        throw ConfigError("nothing to resume in " + e.run_dir.string());
      }
    } else if (exists && !options.overwrite) {
      throw ConfigError("RunExists(" + e.run_dir.string() + "): pass --overwrite or --resume");
    }
  }
  for (const auto& e : out) {
    if (options.overwrite) fs::remove_all(e.run_dir);
    fs::create_directories(e.run_dir / "checkpoints");
    fs::create_directories(e.run_dir / "logs");
    fs::create_directories(e.run_dir / "eval");
    std::ofstream f(e.run_dir / "config.effective.yaml", std::ios::trunc);
    if (!f) throw DataError("cannot write " + (e.run_dir / "config.effective.yaml").string());
    f << e.meta.config_yaml;
  }
  return out;
}

}  // namespace adf
