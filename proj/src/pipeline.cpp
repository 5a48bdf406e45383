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

#include "adf/pipeline.hpp"

#include <set>

#include "adf/error.hpp"

namespace adf {

namespace fs = std::filesystem;

std::string score_file_name(const std::string& dataset) { return encode_field(dataset) + ".csv"; }

SeedReport score_splits(AnyModel& model, const std::vector<NamedSplit>& splits,
                        const std::vector<std::vector<std::string>>& pooled_sets,
                        const std::string& system_id, std::uint64_t seed,
                        const fs::path& eval_dir) {
  std::vector<std::pair<std::string, ScoreSet>> sets;
  for (const auto& s : splits) {
    ScoreSet scores = std::visit(
        [&](auto& m) { return score_dataset(*m, s.loader, system_id, seed); }, model);
    write_scores(eval_dir / "scores" / score_file_name(s.name), scores);
    sets.emplace_back(s.name, std::move(scores));
  }
  SeedReport rep = evaluate_sets(sets, pooled_sets, system_id, seed);
  write_seed_report(eval_dir, rep);
  return rep;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, Registry& registry,
                                      const RunOptions& run_options,
                                      const TrainOptions& train_options) {
  std::vector<Experiment> exps = build_experiment(cfg, registry, run_options);
  std::vector<RunResult> out;
  for (auto& e : exps) {
    RunResult r;
    r.run_dir = e.run_dir;
    r.seed = e.seed;
    r.system_id = e.meta.system_id;
    TrainOptions opts = train_options;
    opts.resume = run_options.resume;
    const BatchLoader* valid = e.data.valid_loader ? &*e.data.valid_loader : nullptr;
    r.train = std::visit(
        [&](auto& m) {
          return train(*m, *e.data.train_loader, valid, e.cfg.training, e.run_dir, e.meta, opts);
        },
        e.model);
    if (!r.train.interrupted && !e.data.tests.empty()) {
      const Checkpoint best = read_checkpoint(r.train.best_checkpoint);
      std::visit(
          [&](auto& m) {
            using T = typename std::decay_t<decltype(*m)>::value_type;
            restore_checkpoint<T>(best, *m, nullptr);
          },
          e.model);
      std::vector<NamedSplit> splits;
      for (std::size_t i = 0; i < e.data.tests.size(); ++i) {
        splits.push_back({e.data.tests[i]->name(), e.data.test_loader(i, e.seed)});
      }
      r.eval = score_splits(e.model, splits, e.cfg.evaluation.pooled_sets, r.system_id, e.seed,
                            e.run_dir / "eval");
    }
    out.push_back(std::move(r));
  }
  return out;
}

LoadedCheckpoint load_for_eval(const fs::path& checkpoint, Registry& registry) {
  const Checkpoint ckpt = read_checkpoint(checkpoint);
  LoadedCheckpoint l;
  l.meta = ckpt.meta();
  l.cfg = load_config_text(l.meta.config_yaml, registry, checkpoint.parent_path()).for_seed(l.meta.seed);
  if (config_hash(l.cfg) != l.meta.config_hash) {
    throw DataError(checkpoint.string() + ": embedded config does not match its hash");
  }
  l.model = build_model(l.cfg, registry, l.meta.seed);
  std::visit(
      [&](auto& m) {
        using T = typename std::decay_t<decltype(*m)>::value_type;
        restore_checkpoint<T>(ckpt, *m, nullptr);
      },
      l.model);
  return l;
}

SeedReport evaluate_checkpoint(const EvalRequest& req, Registry& registry) {
  LoadedCheckpoint l = load_for_eval(req.checkpoint, registry);
  if (req.config) {
    const ExperimentConfig given = load_config(*req.config, registry).for_seed(l.meta.seed);
    if (config_hash(given) != l.meta.config_hash) {
      const std::string msg = "config " + req.config->string() + " (hash " + config_hash(given) +
                              ") does not match the checkpoint (hash " + l.meta.config_hash + ")";
      if (!req.force) throw ConfigError(msg + "; pass --force to evaluate anyway");
      if (req.warn) req.warn(msg);
    }
  }
  // Tables inherit the transform and loader of the configured test split.
  const std::vector<SplitSpec> tests = l.cfg.test_splits();
  SplitSpec base;
  if (!tests.empty()) base = tests.front();
  else if (l.cfg.data.valid) base = *l.cfg.data.valid;
  else if (l.cfg.data.train) base = *l.cfg.data.train;
  base.augment.reset();
  base.loader.shuffle = false;

  std::vector<NamedSplit> splits;
  std::set<std::string> names;
  for (const auto& t : req.tables) {
    SplitSpec s = base;
    s.dataset.type = "table";
    s.dataset.params = Params::object();
    s.dataset.params["path"] = fs::absolute(t).string();
    s.dataset.params = registry.validate(ComponentKind::dataset, "table", s.dataset.params);
    auto ds = make_split(s, registry, t.string(), false);
    if (!names.insert(ds->name()).second) {
      throw ConfigError("two tables share the dataset name \"" + ds->name() + "\"");
    }
    splits.push_back({ds->name(), make_loader(ds, s.transform, std::nullopt, s.loader, l.meta.seed, false)});
  }
  if (splits.empty()) throw ConfigError("eval needs at least one --table");
  return score_splits(l.model, splits, {}, l.meta.system_id, l.meta.seed, req.out_dir);
}

}  // namespace adf
