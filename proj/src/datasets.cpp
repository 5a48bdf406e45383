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

#include "adf/datasets.hpp"

#include <cmath>
#include <numbers>

#include "adf/audio.hpp"
#include "adf/metadata.hpp"

namespace adf {

TableDataset::TableDataset(const Params& params) {
  const std::filesystem::path path = params.at("path").get<std::string>();
  name_ = params.at("name").get<std::string>();
  if (name_.empty()) name_ = path.stem().string();
  const std::string root = params.at("root").get<std::string>();
  root_ = root.empty() ? path.parent_path() : std::filesystem::path(root);
  ConstructOptions opts;
  opts.require_label = false;
  opts.dataset_name = name_;
  auto table = construct(path, opts);
  records_ = std::move(table.records);
  has_labels_ = table.has_labels;
}

ParamSchema TableDataset::schema() {
  return {{"path", ParamType::string, nullptr, "metadata table (.csv or .parquet)"},
          {"name", ParamType::string, "", "dataset name; defaults to the table stem"},
          {"root", ParamType::string, "", "base directory for relative audio paths"}};
}

std::filesystem::path TableDataset::resolve(const UtteranceRecord& record) const {
  std::filesystem::path p = record.audio_path;
  return p.is_absolute() ? p : root_ / p;
}

Waveform TableDataset::load(const UtteranceRecord& record) const {
  return read_wav(resolve(record));
}

void TableDataset::check_sources() const {
  for (const auto& r : records_) {
    if (!std::filesystem::is_regular_file(resolve(r))) {
      throw DataError("utt_id " + r.utt_id + ": audio file not found: " + resolve(r).string());
    }
  }
}

namespace {

Label synth_label(const SynthSpec& spec, std::size_t index) {
  Rng rng(derive_seed(spec.seed, "synth/label", index));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < spec.bonafide_fraction ? Label::bonafide : Label::spoof;
}

}  // namespace

UtteranceRecord synth_record(const SynthSpec& spec, std::size_t index) {
  Rng rng(derive_seed(spec.seed, "synth/meta", index));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  static const char* kLanguages[] = {"en", "de", "fr"};
  UtteranceRecord r;
  r.utt_id = spec.name + "_" + std::to_string(index);
  r.audio_path = "wav/" + r.utt_id + ".wav";
  r.label = synth_label(spec, index);
  r.gender = u(rng) < 0.5 ? Gender::female : Gender::male;
  r.language = kLanguages[static_cast<std::size_t>(u(rng) * 3.0) % 3];
  r.pesq = 1.0 + 3.5 * u(rng);
  r.nisqa_mos = 1.0 + 4.0 * u(rng);
  r.dataset_name = spec.name;
  return r;
}

Waveform synth_waveform(const SynthSpec& spec, std::size_t index) {
  Rng rng(derive_seed(spec.seed, "synth/audio", index));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(std::lround(spec.duration_s * spec.sample_rate));
  const int tones = 3 + static_cast<int>(u(rng) * 3.0);
  std::vector<double> freq(tones), amp(tones), phase(tones);
  for (int k = 0; k < tones; ++k) {
    freq[k] = 100.0 + 900.0 * u(rng);
    amp[k] = 0.2 + 0.8 * u(rng);
    phase[k] = 2.0 * std::numbers::pi * u(rng);
  }
  const double env_rate = 0.5 + 2.0 * u(rng);
  std::vector<double> x(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate;
    double s = 0.0;
    for (int k = 0; k < tones; ++k) s += amp[k] * std::sin(2.0 * std::numbers::pi * freq[k] * t + phase[k]);
    s *= 0.75 + 0.25 * std::sin(2.0 * std::numbers::pi * env_rate * t);
    x[i] = s;
    peak = std::max(peak, std::abs(s));
  }
  const double gain = peak > 0.0 ? 0.5 / peak : 1.0;
  const bool spoof = synth_label(spec, index) == Label::spoof;
  const double half = spec.quant_levels / 2.0;
  Waveform w;
  w.sample_rate = spec.sample_rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i] * gain;
    if (spoof) v = std::round(v * half) / half;
    w.samples[i] = static_cast<float>(v);
  }
  return w;
}

std::filesystem::path write_synthetic_corpus(const SynthSpec& spec,
                                             const std::filesystem::path& dir,
                                             const std::string& table_name) {
  std::filesystem::create_directories(dir / "wav");
  std::vector<UtteranceRecord> records;
  records.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    auto r = synth_record(spec, i);
    write_wav(dir / r.audio_path, synth_waveform(spec, i));
    records.push_back(std::move(r));
  }
  const auto table = dir / table_name;
  write_metadata(table, records);
  return table;
}

SyntheticDataset::SyntheticDataset(SynthSpec spec) : spec_(std::move(spec)) {
  records_.reserve(spec_.count);
  for (std::size_t i = 0; i < spec_.count; ++i) records_.push_back(synth_record(spec_, i));
}

namespace {
SynthSpec spec_from(const Params& p) {
  SynthSpec s;
  s.count = static_cast<std::size_t>(p.at("count").get<long long>());
  s.bonafide_fraction = p.at("bonafide_fraction").get<double>();
  s.sample_rate = static_cast<int>(p.at("sample_rate").get<long long>());
  s.duration_s = p.at("duration_s").get<double>();
  s.seed = static_cast<std::uint64_t>(p.at("seed").get<long long>());
  s.quant_levels = static_cast<int>(p.at("quant_levels").get<long long>());
  s.name = p.at("name").get<std::string>();
  if (s.count == 0) throw DataError("EmptyTable: synthetic dataset with count 0");
  return s;
}
}  // namespace

SyntheticDataset::SyntheticDataset(const Params& params) : SyntheticDataset(spec_from(params)) {}

ParamSchema SyntheticDataset::schema() {
  return {{"count", ParamType::integer, 200, "number of utterances"},
          {"bonafide_fraction", ParamType::real, 0.5, ""},
          {"sample_rate", ParamType::integer, 16000, ""},
          {"duration_s", ParamType::real, 1.0, ""},
          {"seed", ParamType::integer, 0, "corpus seed (independent of the run seed)"},
          {"quant_levels", ParamType::integer, 16, "quantizer levels applied to spoofed audio"},
          {"name", ParamType::string, "synthetic", ""}};
}

Waveform SyntheticDataset::load(const UtteranceRecord& record) const {
  const auto pos = record.utt_id.rfind('_');
  const std::size_t index = std::stoull(record.utt_id.substr(pos + 1));
  return synth_waveform(spec_, index);
}

}  // namespace adf
