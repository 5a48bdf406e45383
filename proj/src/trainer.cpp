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

#include "adf/trainer.hpp"

#include <cmath>
#include <fstream>

#include "adf/eer.hpp"
#include "adf/error.hpp"

namespace adf {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class HistoryLog {
 public:
  HistoryLog(const fs::path& path, std::size_t keep_rows, bool resume) : path_(path) {
    fs::create_directories(path.parent_path());
    if (resume) {
      auto rows = read_history(path);
      if (rows.size() < keep_rows) {
        throw DataError("history " + path.string() + " is shorter than the checkpoint records");
      }
      rows.resize(keep_rows);
      rows_ = std::move(rows);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& r : rows_) out << r.to_json().dump() << '\n';
    out_.open(path, std::ios::app);
  }

  void append(const HistoryRow& row, Tracker* tracker) {
    out_ << row.to_json().dump() << '\n';
    out_.flush();
    if (!out_) throw DataError("cannot append to " + path_.string());
    rows_.push_back(row);
    if (tracker) tracker->log(row);
  }

  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<HistoryRow>& rows() const noexcept { return rows_; }

 private:
  fs::path path_;
  std::vector<HistoryRow> rows_;
  std::ofstream out_;
};

void dump_failure(const fs::path& run_dir, const TrainState& state, const AudioBatch& batch,
                  const std::string& what) {
  std::ofstream out(run_dir / "logs" / "failure_state.json", std::ios::trunc);
  out << json{{"state", state.to_json()}, {"utt_ids", batch.utt_ids}, {"error", what}}.dump(2)
      << '\n';
}

}  // namespace

json HistoryRow::to_json() const {
  json j = {{"step", step}, {"epoch", epoch}, {"split", split}, {"loss", loss}};
  if (eer) j["eer"] = *eer;
  return j;
}

HistoryRow HistoryRow::from_json(const json& j) {
  HistoryRow r;
  r.step = j.at("step").get<long>();
  r.epoch = j.at("epoch").get<int>();
  r.split = j.at("split").get<std::string>();
  r.loss = j.at("loss").get<double>();
  if (j.contains("eer") && !j.at("eer").is_null()) r.eer = j.at("eer").get<double>();
  return r;
}

std::vector<HistoryRow> read_history(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read history " + path.string());
  std::vector<HistoryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(HistoryRow::from_json(json::parse(line)));
  }
  return rows;
}

bool EarlyStopper::observe(double val_loss, TrainState& state) const {
  ++state.validations;
  if (val_loss < state.best_val_loss - min_delta_) {
    state.best_val_loss = val_loss;
    state.since_improvement = 0;
    state.best_validation = state.validations;
    state.best_step = state.step;
    return true;
  }
  ++state.since_improvement;
  return false;
}

template <typename T>
ValidationResult validate(ModelAssembly<T>& model, const BatchLoader& loader) {
  if (loader.num_records() == 0) throw DataError("validation loader is empty");
  double weighted = 0.0;
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t b = 0; b < loader.num_batches(); ++b) {
    const AudioBatch batch = loader.batch(0, b);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch.labels[i] < 0) {
        throw DataError("utt_id " + batch.utt_ids[i] + ": validation requires labels");
      }
    }
    const auto out = model.forward(batch.waveforms, batch.labels);
    weighted += static_cast<double>(out.loss) * static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      scores.push_back(static_cast<double>(out.scores[i]));
      labels.push_back(batch.labels[i]);
    }
  }
  ValidationResult r;
  r.loss = weighted / static_cast<double>(scores.size());
  const auto nb = std::count(labels.begin(), labels.end(), 1);
  if (nb > 0 && nb < static_cast<long>(labels.size())) r.eer = compute_eer(scores, labels).eer;
  return r;
}

template <typename T>
TrainReport train(ModelAssembly<T>& model, const BatchLoader& train_loader,
                  const BatchLoader* valid_loader, const TrainSection& cfg,
                  const fs::path& run_dir, const CheckpointMeta& meta,
                  const TrainOptions& options) {
  if (train_loader.num_records() == 0) throw DataError("training loader is empty");
  const fs::path ckpt_dir = run_dir / "checkpoints";
  TrainReport report;
  report.best_checkpoint = ckpt_dir / "best.ckpt";
  report.last_checkpoint = ckpt_dir / "last.ckpt";

  kernels::AdamHyper hyper;
  hyper.lr = cfg.lr;
  Adam<T> adam(hyper);
  TrainState state;
  if (options.resume) {
    if (!fs::exists(report.last_checkpoint)) {
      throw ConfigError("nothing to resume: " + report.last_checkpoint.string() + " not found");
    }
    const Checkpoint ckpt = read_checkpoint(report.last_checkpoint);
    if (ckpt.meta().config_hash != meta.config_hash) {
      throw ConfigError("cannot resume: checkpoint config hash " + ckpt.meta().config_hash +
                        " differs from " + meta.config_hash);
    }
    restore_checkpoint(ckpt, model, &adam);
    state = ckpt.state();
  }
  HistoryLog history(run_dir / "logs" / "history.jsonl", state.history_rows, options.resume);
  const EarlyStopper stopper(cfg.patience, cfg.min_delta);

  auto save_last = [&] {
    state.history_rows = history.size();
    save_checkpoint(report.last_checkpoint, model, &adam, state, meta);
  };

  auto run_validation = [&](int epoch_label) {
    ValidationResult v;
    if (options.validator) v = options.validator(state.validations + 1);
    else v = validate(model, *valid_loader);
    HistoryRow row{state.step, epoch_label, "valid", v.loss, v.eer};
    history.append(row, options.tracker);
    const bool improved = stopper.observe(v.loss, state);
    state.history_rows = history.size();
    if (improved) save_checkpoint(report.best_checkpoint, model, &adam, state, meta);
    if (cfg.keep_every > 0 && state.validations % cfg.keep_every == 0) {
      save_checkpoint(ckpt_dir / ("validation_" + std::to_string(state.validations) + ".ckpt"),
                      model, &adam, state, meta);
    }
    if (stopper.should_stop(state)) {
      state.finished = true;
      state.stop_reason = "early_stopping";
    }
    save_last();
  };
  const bool can_validate = valid_loader != nullptr || static_cast<bool>(options.validator);

  long steps_this_call = 0;
  while (!state.finished && state.epoch < cfg.max_epochs) {
    const std::size_t nb = train_loader.num_batches();
    while (state.batch < nb && !state.finished) {
      const AudioBatch batch = train_loader.batch(static_cast<std::size_t>(state.epoch), state.batch);
      model.zero_grad();
      LossOutput<T> out;
      try {
        out = model.forward(batch.waveforms, batch.labels);
        if (!std::isfinite(static_cast<double>(out.loss))) throw NumericError("non-finite loss");
        model.backward();
        adam.step(model.trainable());
      } catch (const NumericError& e) {
        dump_failure(run_dir, state, batch, e.what());
        throw NumericError("NonFiniteLoss(step " + std::to_string(state.step + 1) + "): " + e.what());
      }
      ++state.step;
      ++state.batch;
      ++steps_this_call;
      history.append({state.step, state.epoch + 1, "train", static_cast<double>(out.loss), {}},
                     options.tracker);
      if (can_validate && cfg.val_interval > 0 && state.step % cfg.val_interval == 0) {
        run_validation(state.epoch + 1);
      }
      if (options.stop_after_steps > 0 && steps_this_call >= options.stop_after_steps &&
          !state.finished) {
        save_last();
        report.interrupted = true;
        report.history = history.rows();
        report.state = state;
        return report;
      }
    }
    if (state.finished) break;
    ++state.epoch;
    state.batch = 0;
    if (can_validate && cfg.val_interval == 0) run_validation(state.epoch);  // epoch just completed
  }
  if (!state.finished) {
    state.finished = true;
    state.stop_reason = "max_epochs";
  }
  save_last();
  if (!fs::exists(report.best_checkpoint)) fs::copy_file(report.last_checkpoint, report.best_checkpoint);
  report.history = history.rows();
  report.state = state;
  return report;
}

template ValidationResult validate<float>(ModelAssembly<float>&, const BatchLoader&);
template ValidationResult validate<double>(ModelAssembly<double>&, const BatchLoader&);
template TrainReport train<float>(ModelAssembly<float>&, const BatchLoader&, const BatchLoader*,
                                  const TrainSection&, const fs::path&, const CheckpointMeta&,
                                  const TrainOptions&);
template TrainReport train<double>(ModelAssembly<double>&, const BatchLoader&, const BatchLoader*,
                                   const TrainSection&, const fs::path&, const CheckpointMeta&,
                                   const TrainOptions&);

}  // namespace adf
