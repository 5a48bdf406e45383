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

#include "adf/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "adf/error.hpp"
#include "adf/table_io.hpp"

namespace adf {

using ojson = nlohmann::ordered_json;

Attribute parse_attribute(const std::string& name) {
  if (name == "gender") return Attribute::gender;
  if (name == "language") return Attribute::language;
  if (name == "pesq" || name == "quality_pesq") return Attribute::quality_pesq;
  if (name == "nisqa" || name == "nisqa_mos" || name == "quality_nisqa") {
    return Attribute::quality_nisqa;
  }
  throw ConfigError("unknown fairness attribute \"" + name +
                    "\" (expected gender, language, pesq or nisqa)");
}

std::string to_string(Attribute a) {
  switch (a) {
    case Attribute::gender: return "gender";
    case Attribute::language: return "language";
    case Attribute::quality_pesq: return "quality_pesq";
    case Attribute::quality_nisqa: return "quality_nisqa";
  }
  return "?";
}

std::string attribute_column(Attribute a) {
  switch (a) {
    case Attribute::gender: return "gender";
    case Attribute::language: return "language";
    case Attribute::quality_pesq: return "pesq";
    case Attribute::quality_nisqa: return "nisqa_mos";
  }
  return "?";
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty set");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

std::optional<std::string> categorical(const ScoreRecord& r, Attribute a) {
  if (a == Attribute::gender) {
    if (!r.gender || (*r.gender != "F" && *r.gender != "M")) return std::nullopt;
    return r.gender;
  }
  if (!r.language || r.language->empty() || *r.language == "unknown") return std::nullopt;
  return r.language;
}

std::optional<double> quality(const ScoreRecord& r, Attribute a) {
  const auto& v = a == Attribute::quality_pesq ? r.pesq : r.nisqa_mos;
  if (!v || !std::isfinite(*v)) return std::nullopt;
  return v;
}

std::string band_label(const std::vector<double>& edges, std::size_t b) {
  if (edges.empty()) return "all";
  if (b == 0) return "<=" + format_double(edges.front());
  if (b == edges.size()) return ">" + format_double(edges.back());
  return "(" + format_double(edges[b - 1]) + "," + format_double(edges[b]) + "]";
}

bool is_quality(Attribute a) {
  return a == Attribute::quality_pesq || a == Attribute::quality_nisqa;
}

}  // namespace

GroupPartition partition(const ScoreSet& scores, Attribute attribute, const Banding& banding,
                         bool include_unknown) {
  GroupPartition p;
  p.attribute = attribute;
  const std::string column = attribute_column(attribute);
  if (is_quality(attribute)) {
    std::vector<double> known;
    for (const auto& r : scores) {
      if (auto v = quality(r, attribute)) known.push_back(*v);
    }
    if (known.empty()) throw DataError("MissingColumn(\"" + column + "\")");
    if (!banding.edges.empty()) {
      p.edges = banding.edges;
      if (!std::is_sorted(p.edges.begin(), p.edges.end())) {
        throw ConfigError("band edges must be ascending");
      }
    } else {
      if (banding.quantiles < 2) throw ConfigError("quantile banding needs at least 2 bands");
      std::sort(known.begin(), known.end());
      for (int j = 1; j < banding.quantiles; ++j) {
        p.edges.push_back(quantile_sorted(known, static_cast<double>(j) / banding.quantiles));
      }
    }
    p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
    std::vector<std::vector<std::size_t>> bands(p.edges.size() + 1);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto v = quality(scores[i], attribute);
      if (!v) {
        p.unknown.push_back(i);
        continue;
      }
      const auto b = static_cast<std::size_t>(
          std::lower_bound(p.edges.begin(), p.edges.end(), *v) - p.edges.begin());
      bands[b].push_back(i);
    }
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (!bands[b].empty()) p.groups.push_back({band_label(p.edges, b), std::move(bands[b])});
    }
  } else {
    std::map<std::string, std::vector<std::size_t>> by;
    bool any = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto& r = scores[i];
      any |= attribute == Attribute::gender ? r.gender.has_value() : r.language.has_value();
      if (auto v = categorical(r, attribute)) {
        by[*v].push_back(i);
      } else {
        p.unknown.push_back(i);
      }
    }
    if (!any) throw DataError("MissingColumn(\"" + column + "\")");
    for (auto& [k, v] : by) p.groups.push_back({k, std::move(v)});
  }
  if (include_unknown && !p.unknown.empty()) {
    p.groups.push_back({"unknown", p.unknown});
  }
  if (p.groups.size() < 2) {
    throw DataError("FewerThanTwoGroups(" + to_string(attribute) + ": " +
                    std::to_string(p.groups.size()) + " group)");
  }
  return p;
}

double gini(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw DataError("SingleValue: gini needs at least two values");
  std::vector<double> x(values.begin(), values.end());
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("gini: values must be finite and >= 0");
    sum += v;
  }
  if (sum == 0.0) throw DataError("ZeroMean: gini of an all-zero vector");
  std::sort(x.begin(), x.end());
  // sum_i sum_j |x_i - x_j| = 2 sum_i (2i - n - 1) x_(i), i = 1..n
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pair_sum += (2.0 * static_cast<double>(i + 1) - static_cast<double>(n) - 1.0) * x[i];
  }
  pair_sum *= 2.0;
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  return (nd / (nd - 1.0)) * pair_sum / (2.0 * nd * nd * mean);
}

GarbeMode parse_garbe_mode(const std::string& s) {
  if (s == "eer_gini") return GarbeMode::eer_gini;
  if (s == "far_frr_gini") return GarbeMode::far_frr_gini;
  throw ConfigError("unknown GARBE mode \"" + s + "\" (expected eer_gini or far_frr_gini)");
}

std::string to_string(GarbeMode m) {
  return m == GarbeMode::eer_gini ? "eer_gini" : "far_frr_gini";
}

namespace {

// Equal rates are perfectly fair, including the all-zero case gini rejects.
double fair_gini(const std::vector<double>& v) {
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) return 0.0;
  return gini(v);
}

void collect(const ScoreSet& scores, const std::vector<std::size_t>& idx, std::vector<double>& s,
             std::vector<int>& y) {
  for (auto i : idx) {
    const auto& r = scores[i];
    if (!r.label) throw DataError("fairness needs labeled scores (utt_id " + r.utt_id + ")");
    s.push_back(r.score);
    y.push_back(*r.label);
  }
}

}  // namespace

FairnessReport garbe(const ScoreSet& scores, const GroupPartition& part,
                     const GarbeParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) {
    throw ConfigError("GARBE alpha must lie in [0, 1]");
  }
  if (part.groups.size() < 2) throw DataError("FewerThanTwoGroups(" + to_string(part.attribute) + ")");
  FairnessReport rep;
  rep.attribute = part.attribute;
  rep.params = params;
  rep.unknown_n = part.unknown.size();
  rep.edges = part.edges;
  if (!part.groups.empty() && !part.groups.front().members.empty()) {
    rep.system_id = scores[part.groups.front().members.front()].system_id;
  }

  std::vector<double> ps;
  std::vector<int> py;
  std::vector<std::vector<double>> gs(part.groups.size());
  std::vector<std::vector<int>> gy(part.groups.size());
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    collect(scores, part.groups[g].members, gs[g], gy[g]);
    const auto nb = static_cast<std::size_t>(std::count(gy[g].begin(), gy[g].end(), 1));
    if (nb == 0 || nb == gy[g].size()) {
      throw DataError("GroupMissingClass(" + part.groups[g].label + ")");
    }
    ps.insert(ps.end(), gs[g].begin(), gs[g].end());
    py.insert(py.end(), gy[g].begin(), gy[g].end());
  }
  const EerResult pooled = compute_eer(ps, py);
  rep.pooled_eer = pooled.eer;
  rep.threshold = pooled.threshold;

  std::vector<double> eers, fars, frrs;
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    GroupStats st;
    st.label = part.groups[g].label;
    st.n = gy[g].size();
    st.n_bonafide = static_cast<std::size_t>(std::count(gy[g].begin(), gy[g].end(), 1));
    st.n_spoof = st.n - st.n_bonafide;
    st.eer = compute_eer(gs[g], gy[g]).eer;
    const ErrorRates er = rates_at(gs[g], gy[g], pooled.threshold);
    st.far_at_t = er.far;
    st.frr_at_t = er.frr;
    eers.push_back(st.eer);
    fars.push_back(st.far_at_t);
    frrs.push_back(st.frr_at_t);
    rep.groups.push_back(std::move(st));
  }
  rep.garbe_eer = fair_gini(eers);
  rep.garbe_far_frr = params.alpha * fair_gini(frrs) + (1.0 - params.alpha) * fair_gini(fars);
  rep.garbe = params.mode == GarbeMode::eer_gini ? rep.garbe_eer : rep.garbe_far_frr;

  if (part.attribute == Attribute::gender) {
    const GroupStats* f = nullptr;
    const GroupStats* m = nullptr;
    for (const auto& g : rep.groups) {
      if (g.label == "F") f = &g;
      if (g.label == "M") m = &g;
    }
    if (f && m) rep.delta = gender_delta(f->eer, m->eer);
  }
  return rep;
}

GenderGap gender_gap(const ScoreSet& scores, const GroupPartition& part) {
  if (part.attribute != Attribute::gender) throw ConfigError("gender_gap needs a gender partition");
  const Group* f = nullptr;
  const Group* m = nullptr;
  for (const auto& g : part.groups) {
    if (g.label == "F") f = &g;
    if (g.label == "M") m = &g;
  }
  if (!f || !m) throw DataError("FewerThanTwoGroups(gender: need both F and M)");
  auto group_eer = [&](const Group& g) {
    std::vector<double> s;
    std::vector<int> y;
    collect(scores, g.members, s, y);
    const auto nb = std::count(y.begin(), y.end(), 1);
    if (nb == 0 || nb == static_cast<long>(y.size())) {
      throw DataError("GroupMissingClass(" + g.label + ")");
    }
    return compute_eer(s, y).eer;
  };
  GenderGap gap;
  gap.eer_f = group_eer(*f);
  gap.eer_m = group_eer(*m);
  gap.delta = gender_delta(gap.eer_f, gap.eer_m);
  return gap;
}

std::vector<LanguageRow> per_language_table(const ScoreSet& scores) {
  std::map<std::string, std::map<std::string, ScoreSet>> by;  // language → system → scores
  std::set<std::string> systems;
  for (const auto& r : scores) {
    systems.insert(r.system_id);
    if (auto lang = categorical(r, Attribute::language)) by[*lang][r.system_id].push_back(r);
  }
  if (by.empty()) throw DataError("MissingColumn(\"language\")");
  std::vector<LanguageRow> rows;
  for (const auto& [lang, per] : by) {
    LanguageRow row;
    row.language = lang;
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& sys : systems) {
      std::optional<double> e;
      if (auto it = per.find(sys); it != per.end()) {
        if (auto res = eer_of(it->second)) e = res->eer;
      }
      row.per_system.emplace_back(sys, e);
      if (e) {
        row.min = row.min ? std::min(*row.min, *e) : *e;
        row.max = row.max ? std::max(*row.max, *e) : *e;
        sum += *e;
        ++n;
      }
    }
    if (n > 0) row.mean = sum / static_cast<double>(n);
    rows.push_back(std::move(row));
  }
  if (std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.mean.has_value(); })) {
    throw DataError("per-language table: no language has both classes");
  }
  std::stable_sort(rows.begin(), rows.end(), [](const LanguageRow& a, const LanguageRow& b) {
    if (a.mean.has_value() != b.mean.has_value()) return a.mean.has_value();
    if (!a.mean) return false;
    return *a.mean < *b.mean;
  });
  return rows;
}

ojson to_json(const FairnessReport& r) {
  ojson o;
  o["system_id"] = r.system_id;
  o["attribute"] = to_string(r.attribute);
  o["mode"] = to_string(r.params.mode);
  o["alpha"] = r.params.alpha;
  ojson groups = ojson::object();
  for (const auto& g : r.groups) {
    groups[g.label] = {{"n", g.n},
                       {"n_bonafide", g.n_bonafide},
                       {"n_spoof", g.n_spoof},
                       {"eer", g.eer},
                       {"far_at_t", g.far_at_t},
                       {"frr_at_t", g.frr_at_t}};
  }
  o["groups"] = groups;
  o["garbe"] = r.garbe;
  o["garbe_far_frr_gini"] = r.garbe_far_frr;
  o["garbe_eer_gini"] = r.garbe_eer;
  o["threshold"] = r.threshold;
  o["pooled_eer"] = r.pooled_eer;
  o["unknown_n"] = r.unknown_n;
  if (!r.edges.empty()) o["band_edges"] = r.edges;
  if (r.delta) o["delta"] = *r.delta;
  return o;
}

ojson to_json(const std::vector<LanguageRow>& rows) {
  ojson arr = ojson::array();
  for (const auto& row : rows) {
    ojson o;
    o["language"] = row.language;
    ojson per = ojson::object();
    for (const auto& [sys, e] : row.per_system) per[sys] = e ? ojson(*e) : ojson("n/a");
    o["per_system"] = per;
    if (row.mean) {
      o["mean"] = *row.mean;
      o["min"] = *row.min;
      o["max"] = *row.max;
    } else {
      o["mean"] = "n/a";
    }
    arr.push_back(o);
  }
  return arr;
}

std::vector<FairnessReport> fairness_by_system(const ScoreSet& scores,
                                               const std::vector<Attribute>& attributes,
                                               const Banding& pesq, const Banding& nisqa,
                                               const GarbeParams& params,
                                               bool include_unknown) {
  std::map<std::string, ScoreSet> by;
  for (const auto& r : scores) by[r.system_id].push_back(r);
  std::vector<FairnessReport> out;
  for (const auto& [sys, set] : by) {
    for (const auto a : attributes) {
      const Banding& b = a == Attribute::quality_nisqa ? nisqa : pesq;
      const GroupPartition p = partition(set, a, b, include_unknown);
      out.push_back(garbe(set, p, params));
      out.back().system_id = sys;
    }
  }
  return out;
}

void write_garbe_table(const std::filesystem::path& path,
                       const std::vector<FairnessReport>& reports) {
  const std::vector<std::pair<Attribute, std::string>> cols = {
      {Attribute::quality_pesq, "PESQ"},
      {Attribute::quality_nisqa, "NISQA-MOS"},
      {Attribute::gender, "Gender"},
      {Attribute::language, "Language"}};
  std::map<std::string, std::map<Attribute, double>> by;
  for (const auto& r : reports) by[r.system_id][r.attribute] = r.garbe;
  StringTable t;
  t.columns = {"system_id"};
  for (const auto& c : cols) t.columns.push_back(c.second);
  for (const auto& [sys, vals] : by) {
    std::vector<std::optional<std::string>> row = {sys};
    for (const auto& c : cols) {
      auto it = vals.find(c.first);
      row.push_back(it == vals.end() ? std::nullopt
                                     : std::optional<std::string>(format_double(it->second)));
    }
    t.rows.push_back(std::move(row));
  }
  std::filesystem::create_directories(path.parent_path());
  write_csv(path, t);
}

}  // namespace adf
