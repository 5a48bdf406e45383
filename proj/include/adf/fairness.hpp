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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adf/evaluator.hpp"

namespace adf {

enum class Attribute { gender, language, quality_pesq, quality_nisqa };

/// Accepts gender, language, pesq, nisqa, quality_pesq, quality_nisqa.
Attribute parse_attribute(const std::string& name);
std::string to_string(Attribute a);
/// Column in score files that carries the attribute.
std::string attribute_column(Attribute a);

struct Banding {
  int quantiles = 4;           // used when edges is empty
  std::vector<double> edges;   // ascending; a value on an edge goes to the lower band
};

struct Group {
  std::string label;
  std::vector<std::size_t> members;  // indices into the score set
};

/// Groups are disjoint and listed in a stable order (bands ascending,
/// categorical values sorted). Records without the attribute go to unknown.
struct GroupPartition {
  Attribute attribute = Attribute::gender;
  std::vector<Group> groups;
  std::vector<std::size_t> unknown;
  std::vector<double> edges;  // resolved band edges for quality attributes
};

GroupPartition partition(const ScoreSet& scores, Attribute attribute, const Banding& banding = {},
                         bool include_unknown = false);

/// Linear-interpolation quantile of sorted values at probability p.
double quantile_sorted(std::span<const double> sorted, double p);

/// Sample-corrected relative mean absolute difference.
double gini(std::span<const double> values);

enum class GarbeMode { eer_gini, far_frr_gini };
GarbeMode parse_garbe_mode(const std::string& s);
std::string to_string(GarbeMode m);

struct GarbeParams {
  double alpha = 0.5;
  GarbeMode mode = GarbeMode::far_frr_gini;
};

struct GroupStats {
  std::string label;
  std::size_t n = 0;
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
  double eer = 0.0;
  double far_at_t = 0.0;
  double frr_at_t = 0.0;
};

struct FairnessReport {
  std::string system_id;
  Attribute attribute = Attribute::gender;
  GarbeParams params;
  std::vector<GroupStats> groups;
  std::size_t unknown_n = 0;
  std::vector<double> edges;
  double pooled_eer = 0.0;
  double threshold = 0.0;     // pooled-EER threshold used for FAR/FRR
  double garbe = 0.0;         // value of the selected mode
  double garbe_far_frr = 0.0;
  double garbe_eer = 0.0;
  std::optional<double> delta;  // gender only: EER_F - EER_M
};

FairnessReport garbe(const ScoreSet& scores, const GroupPartition& part,
                     const GarbeParams& params = {});

struct GenderGap {
  double delta = 0.0;
  double eer_f = 0.0;
  double eer_m = 0.0;
};

/// Positive delta means female speakers see more errors.
constexpr double gender_delta(double eer_f, double eer_m) { return eer_f - eer_m; }
GenderGap gender_gap(const ScoreSet& scores, const GroupPartition& part);

struct LanguageRow {
  std::string language;
  std::vector<std::pair<std::string, std::optional<double>>> per_system;  // n/a when nullopt
  std::optional<double> min, max, mean;
};

/// Sorted by mean EER ascending; languages without any EER come last.
std::vector<LanguageRow> per_language_table(const ScoreSet& scores);

nlohmann::ordered_json to_json(const FairnessReport& r);
nlohmann::ordered_json to_json(const std::vector<LanguageRow>& rows);

/// One report per (system, attribute); systems sorted by id.
std::vector<FairnessReport> fairness_by_system(const ScoreSet& scores,
                                               const std::vector<Attribute>& attributes,
                                               const Banding& pesq, const Banding& nisqa,
                                               const GarbeParams& params,
                                               bool include_unknown);

/// Table with rows = system and columns PESQ, NISQA-MOS, Gender, Language.
void write_garbe_table(const std::filesystem::path& path,
                       const std::vector<FairnessReport>& reports);

}  // namespace adf
