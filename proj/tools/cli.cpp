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

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>

#include "adf/config.hpp"
#include "adf/datasets.hpp"
#include "adf/error.hpp"
#include "adf/fairness.hpp"
#include "adf/pipeline.hpp"
#include "adf/registry.hpp"
#include "adf/table_io.hpp"
#include "adf/workbench.hpp"

namespace adf::cli {

namespace fs = std::filesystem;

namespace {

class StreamTracker : public Tracker {
 public:
  explicit StreamTracker(std::ostream& out) : out_(out) {}
  void log(const HistoryRow& row) override {
    if (row.split != "valid") return;
    out_ << "  step " << row.step << " epoch " << row.epoch << " valid loss "
         << format_double(row.loss);
    if (row.eer) out_ << " eer " << percent(*row.eer) << "%";
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

struct TrainArgs {
  std::string config;
  std::vector<std::uint64_t> seeds;
  bool resume = false;
  bool overwrite = false;
  std::vector<std::string> plugins;
  long stop_after_steps = 0;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  Registry& reg = Registry::global();
  for (const auto& p : a.plugins) load_plugin(reg, p);
  ExperimentConfig cfg = load_config(a.config, reg);
  if (!a.seeds.empty()) cfg.seeds = a.seeds;
  RunOptions ro{a.overwrite, a.resume};
  StreamTracker tracker(out);
  TrainOptions to;
  to.stop_after_steps = a.stop_after_steps;
  if (!a.quiet) to.tracker = &tracker;
  for (const auto& r : run_experiment(cfg, reg, ro, to)) {
    out << r.system_id << " seed " << r.seed << ": " << r.train.state.step << " steps, ";
    if (r.train.interrupted) {
      out << "interrupted (resume with --resume)\n";
      continue;
    }
    out << (r.train.state.stop_reason.empty() ? "finished" : r.train.state.stop_reason)
        << ", best " << r.train.best_checkpoint.string() << '\n';
    if (r.eval) {
      for (const auto& d : r.eval->datasets) {
        out << "  " << d.name << ": ";
        if (d.eer) out << "EER " << percent(*d.eer) << "%\n";
        else out << "EER unavailable (" << d.note << ")\n";
      }
      if (r.eval->macro_eer) out << "  macro EER " << percent(*r.eval->macro_eer) << "%\n";
    }
  }
  return 0;
}

struct EvalArgs {
  std::string checkpoint;
  std::vector<std::string> tables;
  std::string config;
  bool force = false;
  std::string out;
  std::vector<std::string> plugins;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  Registry& reg = Registry::global();
  for (const auto& p : a.plugins) load_plugin(reg, p);
  EvalRequest req;
  req.checkpoint = a.checkpoint;
  for (const auto& t : a.tables) req.tables.emplace_back(t);
  if (!a.config.empty()) req.config = fs::path(a.config);
  req.force = a.force;
  req.warn = [&](const std::string& m) { err << "warning: " << m << '\n'; };
  if (!a.out.empty()) {
    req.out_dir = a.out;
  } else {
    req.out_dir = fs::absolute(a.checkpoint).parent_path().parent_path() / "eval";
  }
  const SeedReport rep = evaluate_checkpoint(req, reg);
  for (const auto& d : rep.datasets) {
    out << d.name << ": ";
    if (d.eer) out << "EER " << percent(*d.eer) << "%\n";
    else out << "EER unavailable (" << d.note << ")\n";
  }
  if (rep.macro_eer) out << "mean EER " << percent(*rep.macro_eer) << "%\n";
  out << "wrote " << req.out_dir.string() << '\n';
  return 0;
}

struct FairnessArgs {
  std::vector<std::string> scores;
  std::vector<std::string> attributes;
  double alpha = 0.5;
  std::string mode = "far_frr_gini";
  int bands = 4;
  std::vector<double> pesq_edges;
  std::vector<double> nisqa_edges;
  bool include_unknown = false;
  std::string out = "fairness";
};

void write_json(const fs::path& p, const nlohmann::ordered_json& j) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::trunc);
  f << j.dump(2) << '\n';
  if (!f) throw DataError("cannot write " + p.string());
}

int cmd_fairness(const FairnessArgs& a, std::ostream& out) {
  ScoreSet all;
  for (const auto& s : a.scores) {
    ScoreSet part = read_scores(s);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (all.empty()) throw DataError("no score records in the given files");
  std::vector<Attribute> attrs;
  for (const auto& s : a.attributes) attrs.push_back(parse_attribute(s));
  GarbeParams params{a.alpha, parse_garbe_mode(a.mode)};
  const Banding pesq{a.bands, a.pesq_edges};
  const Banding nisqa{a.bands, a.nisqa_edges};
  const auto reports = fairness_by_system(all, attrs, pesq, nisqa, params, a.include_unknown);

  std::map<std::string, int> per_system;
  for (const auto& r : reports) ++per_system[r.system_id];
  const fs::path root = a.out;
  for (const auto& r : reports) {
    const fs::path dir = per_system.size() == 1 ? root : root / encode_field(r.system_id);
    const fs::path file = dir / ("fairness_" + to_string(r.attribute) + ".json");
    write_json(file, to_json(r));
    out << r.system_id << " " << to_string(r.attribute) << ": GARBE " << format_double(r.garbe);
    if (r.delta) out << ", delta " << format_double(*r.delta);
    out << " (" << file.string() << ")\n";
  }
  write_garbe_table(root / "garbe.csv", reports);
  if (std::find(attrs.begin(), attrs.end(), Attribute::language) != attrs.end()) {
    write_json(root / "language_eer.json", to_json(per_language_table(all)));
  }
  return 0;
}

int cmd_matrix_expand(const std::string& matrix, const std::string& out_dir, std::ostream& out) {
  Registry& reg = Registry::global();
  const MatrixSpec spec = load_matrix(matrix);
  const fs::path dir = out_dir.empty() ? fs::path(matrix).parent_path() / (spec.name + "_configs")
                                       : fs::path(out_dir);
  const GridInfo g = expand_matrix(spec, reg, dir);
  for (const auto& c : g.cells) out << c.config_path.string() << '\n';
  out << g.cells.size() << " configs, " << g.cells.size() * std::max<std::size_t>(g.seeds.size(), 1)
      << " runs\n";
  return 0;
}

int cmd_aggregate(const std::string& root, const std::string& out_dir, std::ostream& out) {
  const AggregateResult agg = collect_reports(root);
  const fs::path dir = out_dir.empty() ? fs::path(root) / "aggregate" : fs::path(out_dir);
  write_aggregates(agg, dir);
  out << agg.rows.size() << " rows from "
      << agg.frontends.size() * agg.backends.size() * agg.training_sets.size() << " systems, "
      << agg.seeds.size() << " seeds, " << agg.datasets.size() << " datasets → " << dir.string()
      << '\n';
  return 0;
}

int cmd_components(const std::string& kind, const std::vector<std::string>& plugins,
                   std::ostream& out) {
  Registry& reg = Registry::global();
  for (const auto& p : plugins) load_plugin(reg, p);
  std::vector<ComponentKind> kinds;
  if (kind.empty()) {
    kinds = {ComponentKind::frontend, ComponentKind::backend, ComponentKind::loss,
             ComponentKind::augmentation, ComponentKind::dataset};
  } else {
    kinds = {parse_kind(kind)};
  }
  for (auto k : kinds) {
    out << to_string(k) << ":\n";
    for (const auto& n : reg.list(k)) {
      out << "  " << n;
      const auto& schema = reg.schema(k, n);
      if (!schema.empty()) {
        out << " (";
        for (std::size_t i = 0; i < schema.size(); ++i) {
          out << (i ? ", " : "") << schema[i].key;
          if (!schema[i].required()) out << "=" << schema[i].default_value.dump();
        }
        out << ")";
      }
      out << '\n';
    }
    for (const auto& n : reg.reserved(k)) out << "  " << n << " [not loaded]\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train and evaluate audio deepfake detectors", "adf"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train every seed of a config, then score its test sets");
  train->add_option("config", ta.config, "Experiment config (YAML)")->required();
  train->add_option("--seed", ta.seeds, "Override the configured seed list");
  train->add_flag("--resume", ta.resume, "Continue from checkpoints/last.ckpt");
  train->add_flag("--overwrite", ta.overwrite, "Replace an existing run directory");
  train->add_option("--plugin", ta.plugins, "Plugin library to load first");
  train->add_flag("--quiet", ta.quiet, "Only print the summary");
  train->add_option("--stop-after-steps", ta.stop_after_steps)->group("");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score tables with a checkpoint");
  eval->add_option("--checkpoint", ea.checkpoint, "Checkpoint file")->required();
  eval->add_option("--table", ea.tables, "Metadata table to score")->required();
  eval->add_option("--config", ea.config, "Config the checkpoint must match");
  eval->add_flag("--force", ea.force, "Warn instead of failing on a config mismatch");
  eval->add_option("--out", ea.out, "Output directory (default: <run>/eval)");
  eval->add_option("--plugin", ea.plugins, "Plugin library to load first");

  FairnessArgs fa;
  auto* fair = app.add_subcommand("fairness", "GARBE and gender-gap analysis of score files");
  fair->add_option("--scores", fa.scores, "Score file(s)")->required();
  fair->add_option("--attribute", fa.attributes, "gender, language, pesq or nisqa")->required();
  fair->add_option("--alpha", fa.alpha, "FRR weight in far_frr_gini mode")->check(CLI::Range(0.0, 1.0));
  fair->add_option("--mode", fa.mode, "far_frr_gini or eer_gini");
  fair->add_option("--bands", fa.bands, "Quantile bands for quality attributes")->check(CLI::PositiveNumber);
  fair->add_option("--pesq-edges", fa.pesq_edges, "Explicit PESQ band edges")->delimiter(',');
  fair->add_option("--nisqa-edges", fa.nisqa_edges, "Explicit NISQA-MOS band edges")->delimiter(',');
  fair->add_flag("--include-unknown", fa.include_unknown, "Treat missing values as a group");
  fair->add_option("--out", fa.out, "Output directory");

  std::string matrix_path, matrix_out;
  auto* matrix = app.add_subcommand("matrix", "Experiment grids");
  matrix->require_subcommand(1);
  auto* expand = matrix->add_subcommand("expand", "Write one config per grid cell");
  expand->add_option("matrix", matrix_path, "Matrix spec (YAML)")->required();
  expand->add_option("--out", matrix_out, "Config directory (default: <name>_configs)");

  std::string agg_root, agg_out;
  auto* aggregate = app.add_subcommand("aggregate", "Tables over all reports under a run root");
  aggregate->add_option("root", agg_root, "Run root")->required();
  aggregate->add_option("--out", agg_out, "Output directory (default: <root>/aggregate)");

  std::string kind;
  std::vector<std::string> list_plugins;
  auto* components = app.add_subcommand("components", "Registered components");
  components->require_subcommand(1);
  auto* list = components->add_subcommand("list", "List components and their parameters");
  list->add_option("--kind", kind, "frontend, backend, loss, augmentation or dataset");
  list->add_option("--plugin", list_plugins, "Plugin library to load first");

  SynthSpec synth_spec;
  std::string synth_out, synth_table = "metadata.csv";
  auto* synth = app.add_subcommand("synth", "Write a synthetic tone-complex corpus");
  synth->add_option("--out", synth_out, "Corpus directory")->required();
  synth->add_option("--count", synth_spec.count, "Utterances");
  synth->add_option("--seed", synth_spec.seed, "Corpus seed");
  synth->add_option("--duration", synth_spec.duration_s, "Seconds per utterance");
  synth->add_option("--sample-rate", synth_spec.sample_rate, "Hz");
  synth->add_option("--name", synth_spec.name, "Dataset name");
  synth->add_option("--table", synth_table, "Table file name (.csv or .parquet)");

  std::vector<std::string> argv_store = {"adf"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::config);
  }

  try {
    if (*train) return cmd_train(ta, out);
    if (*eval) return cmd_eval(ea, out, err);
    if (*fair) return cmd_fairness(fa, out);
    if (*expand) return cmd_matrix_expand(matrix_path, matrix_out, out);
    if (*aggregate) return cmd_aggregate(agg_root, agg_out, out);
    if (*list) return cmd_components(kind, list_plugins, out);
    if (*synth) {
      synth_spec.name = synth_spec.name.empty() ? "synthetic" : synth_spec.name;
      out << write_synthetic_corpus(synth_spec, synth_out, synth_table).string() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace adf::cli
