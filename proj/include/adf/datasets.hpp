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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adf/components.hpp"
#include "adf/registry.hpp"

namespace adf {

/// Metadata table (CSV/Parquet) with WAV files on disk. Relative audio
/// paths resolve against `root`, or the table's directory when unset.
class TableDataset : public Dataset {
 public:
  explicit TableDataset(const Params& params);

  const std::vector<UtteranceRecord>& records() const override { return records_; }
  Waveform load(const UtteranceRecord& record) const override;
  bool has_labels() const override { return has_labels_; }
  std::string name() const override { return name_; }
  void check_sources() const override;

  std::filesystem::path resolve(const UtteranceRecord& record) const;

  static ParamSchema schema();

 private:
  std::string name_;
  std::filesystem::path root_;
  std::vector<UtteranceRecord> records_;
  bool has_labels_ = false;
};

/// Generator settings for the tone-complex corpus: bonafide utterances are
/// sums of band-limited sinusoids; spoofed ones come from the same generator
/// followed by a coarse amplitude quantizer.
struct SynthSpec {
  std::size_t count = 200;
  double bonafide_fraction = 0.5;
  int sample_rate = 16000;
  double duration_s = 1.0;
  std::uint64_t seed = 0;
  int quant_levels = 16;
  std::string name = "synthetic";
};

/// Record i of the corpus (metadata only, deterministic in spec.seed).
UtteranceRecord synth_record(const SynthSpec& spec, std::size_t index);
Waveform synth_waveform(const SynthSpec& spec, std::size_t index);

/// Writes <dir>/wav/<utt_id>.wav plus <dir>/<table_name>; returns the table path.
std::filesystem::path write_synthetic_corpus(const SynthSpec& spec,
                                             const std::filesystem::path& dir,
                                             const std::string& table_name = "metadata.csv");

/// In-memory corpus; audio paths are "synthetic://<name>/<index>".
class SyntheticDataset : public Dataset {
 public:
  explicit SyntheticDataset(const Params& params);
  explicit SyntheticDataset(SynthSpec spec);

  const std::vector<UtteranceRecord>& records() const override { return records_; }
  Waveform load(const UtteranceRecord& record) const override;
  bool has_labels() const override { return true; }
  std::string name() const override { return spec_.name; }

  static ParamSchema schema();

 private:
  SynthSpec spec_;
  std::vector<UtteranceRecord> records_;
};

}  // namespace adf
