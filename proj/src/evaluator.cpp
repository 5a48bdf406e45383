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

#include "adf/evaluator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "adf/error.hpp"
#include "adf/table_io.hpp"

namespace adf {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename T>
ScoreSet score_dataset(ModelAssembly<T>& model, const BatchLoader& loader,
                       const std::string& system_id, std::uint64_t seed) {
  if (loader.training()) throw ConfigError("score_dataset needs an evaluation loader");
  const auto& records = loader.dataset().records();
  ScoreSet out;
  out.reserve(records.size());
  for (std::size_t b = 0; b < loader.num_batches(); ++b) {
    const AudioBatch batch = loader.batch(0, b);
    const std::vector<T> s = model.score(batch.waveforms);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& rec = records[batch.record_indices[i]];
      ScoreRecord r;
      r.utt_id = rec.utt_id;
      r.score = static_cast<double>(s[i]);
      if (!std::isfinite(r.score)) throw NumericError("non-finite score for utt_id " + rec.utt_id);
      if (rec.label) r.label = static_cast<int>(*rec.label);
      r.dataset_name = loader.dataset().name();
      r.seed = seed;
      r.system_id = system_id;
      if (rec.gender) r.gender = to_string(*rec.gender);
      r.language = rec.language;
      r.pesq = rec.pesq;
      r.nisqa_mos = rec.nisqa_mos;
      out.push_back(std::move(r));
    }
  }
  return out;
}

template ScoreSet score_dataset<float>(ModelAssembly<float>&, const BatchLoader&,
                                       const std::string&, std::uint64_t);
template ScoreSet score_dataset<double>(ModelAssembly<double>&, const BatchLoader&,
                                        const std::string&, std::uint64_t);

void write_scores(const fs::path& path, const ScoreSet& scores) {
  bool g = false, l = false, p = false, q = false;
  for (const auto& r : scores) {
    g |= r.gender.has_value();
    l |= r.language.has_value();
    p |= r.pesq.has_value();
    q |= r.nisqa_mos.has_value();
  }
  StringTable t;
  t.columns = {"utt_id", "score", "label", "dataset_name", "seed", "system_id"};
  if (g) t.columns.push_back("gender");
  if (l) t.columns.push_back("language");
  if (p) t.columns.push_back("pesq");
  if (q) t.columns.push_back("nisqa_mos");
  for (const auto& r : scores) {
    std::vector<std::optional<std::string>> row = {
        r.utt_id,
        format_double(r.score),
        r.label ? std::optional<std::string>(to_string(static_cast<Label>(*r.label)))
                : std::nullopt,
        r.dataset_name,
        std::to_string(r.seed),
        r.system_id};
    auto num = [](const std::optional<double>& v) {
      return v ? std::optional<std::string>(format_double(*v)) : std::nullopt;
    };
    if (g) row.push_back(r.gender);
    if (l) row.push_back(r.language);
    if (p) row.push_back(num(r.pesq));
    if (q) row.push_back(num(r.nisqa_mos));
    t.rows.push_back(std::move(row));
  }
  fs::create_directories(path.parent_path());
  if (is_parquet_path(path)) {
    write_parquet(path, t, {"score", "seed", "pesq", "nisqa_mos"});
  } else {
    write_csv(path, t);
  }
}

ScoreSet read_scores(const fs::path& path) {
  const StringTable t = read_table(path);
  auto col = [&](const char* name, bool required) {
    const int c = t.column(name);
    if (c < 0 && required) {
      throw DataError(path.string() + ": MissingColumn(\"" + std::string(name) + "\")");
    }
    return c;
  };
  const int c_id = col("utt_id", true), c_score = col("score", true), c_label = col("label", false);
  const int c_ds = col("dataset_name", true), c_seed = col("seed", true),
            c_sys = col("system_id", true);
  const int c_g = col("gender", false), c_l = col("language", false), c_p = col("pesq", false),
            c_q = col("nisqa_mos", false);
  ScoreSet out;
  std::size_t line = 1;
  for (const auto& row : t.rows) {
    ++line;
    auto cell = [&](int c) -> std::optional<std::string> {
      if (c < 0) return std::nullopt;
      return row[c];
    };
    auto need = [&](int c, const char* name) {
      auto v = cell(c);
      if (!v) throw DataError(path.string() + " row " + std::to_string(line) + ": empty " + name);
      return *v;
    };
    auto real = [&](const std::string& s, const char* name) {
      try {
        std::size_t pos = 0;
        const double d = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return d;
      } catch (const std::exception&) {
        throw DataError(path.string() + " row " + std::to_string(line) + ": bad " + name +
                        " \"" + s + "\"");
      }
    };
    ScoreRecord r;
    r.utt_id = need(c_id, "utt_id");
    r.score = real(need(c_score, "score"), "score");
    if (auto lab = cell(c_label)) {
      const auto parsed = parse_label(*lab);
      if (!parsed) throw DataError(path.string() + ": bad label \"" + *lab + "\"");
      r.label = static_cast<int>(*parsed);
    }
    r.dataset_name = need(c_ds, "dataset_name");
    r.seed = static_cast<std::uint64_t>(real(need(c_seed, "seed"), "seed"));
    r.system_id = need(c_sys, "system_id");
    r.gender = cell(c_g);
    r.language = cell(c_l);
    if (auto v = cell(c_p)) r.pesq = real(*v, "pesq");
    if (auto v = cell(c_q)) r.nisqa_mos = real(*v, "nisqa_mos");
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<EerResult> eer_of(const ScoreSet& scores) {
  std::vector<double> s;
  std::vector<int> y;
  bool has_b = false, has_s = false;
  for (const auto& r : scores) {
    if (!r.label) return std::nullopt;
    s.push_back(r.score);
    y.push_back(*r.label);
    has_b |= *r.label == 1;
    has_s |= *r.label == 0;
  }
  if (!has_b || !has_s) return std::nullopt;
  return compute_eer(s, y);
}

namespace {

DatasetEer dataset_eer(const std::string& name, const ScoreSet& s) {
  DatasetEer d;
  d.name = name;
  d.n = s.size();
  const bool unlabeled = std::any_of(s.begin(), s.end(), [](const auto& r) { return !r.label; });
  if (unlabeled) {
    d.note = "unlabeled";
    return d;
  }
  if (auto e = eer_of(s)) {
    d.eer = e->eer;
    d.threshold = e->threshold;
  } else {
    d.note = "single class";
  }
  return d;
}

ojson eer_json(const DatasetEer& d) {
  ojson o;
  o["name"] = d.name;
  o["n"] = d.n;
  if (d.eer) {
    o["eer"] = *d.eer;
    o["eer_percent"] = percent(*d.eer);
    o["threshold"] = *d.threshold;
  } else {
    o["eer"] = nullptr;
    o["note"] = d.note;
  }
  return o;
}

DatasetEer eer_from_json(const json& j) {
  DatasetEer d;
  d.name = j.at("name").get<std::string>();
  d.n = j.at("n").get<std::size_t>();
  if (!j.at("eer").is_null()) {
    d.eer = j.at("eer").get<double>();
    d.threshold = j.at("threshold").get<double>();
  } else if (j.contains("note")) {
    d.note = j.at("note").get<std::string>();
  }
  return d;
}

ojson stat_json(const SeedStat& s) {
  ojson o;
  ojson per = ojson::object();
  for (const auto& [seed, v] : s.per_seed) per[std::to_string(seed)] = v;
  o["per_seed"] = per;
  o["mean"] = s.mean;
  o["std"] = s.std;
  o["n"] = s.n;
  o["std_defined"] = s.std_defined;
  o["mean_percent"] = percent(s.mean);
  o["std_percent"] = percent(s.std);
  return o;
}

}  // namespace

std::string pooled_name(const std::vector<std::string>& group) {
  std::string n;
  for (const auto& g : group) n += (n.empty() ? "" : "+") + g;
  return n;
}

SeedReport evaluate_sets(const std::vector<std::pair<std::string, ScoreSet>>& sets,
                         const std::vector<std::vector<std::string>>& pooled_sets,
                         const std::string& system_id, std::uint64_t seed) {
  SeedReport r;
  r.system_id = system_id;
  r.seed = seed;
  double sum = 0.0;
  std::size_t counted = 0;
  bool all = true;
  for (const auto& [name, s] : sets) {
    r.datasets.push_back(dataset_eer(name, s));
    if (r.datasets.back().eer) {
      sum += *r.datasets.back().eer;
      ++counted;
    } else {
      all = false;
    }
  }
  if (all && counted > 0) r.macro_eer = sum / static_cast<double>(counted);
  for (const auto& group : pooled_sets) {
    ScoreSet cat;
    for (const auto& member : group) {
      auto it = std::find_if(sets.begin(), sets.end(), [&](const auto& p) { return p.first == member; });
      if (it == sets.end()) throw ConfigError("pooled set member \"" + member + "\" was not scored");
      cat.insert(cat.end(), it->second.begin(), it->second.end());
    }
    r.pooled.push_back(dataset_eer(pooled_name(group), cat));
  }
  return r;
}

std::string percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

ojson to_json(const SeedReport& r) {
  ojson o;
  o["system_id"] = r.system_id;
  o["seed"] = r.seed;
  o["units"] = "fraction";
  o["datasets"] = ojson::array();
  for (const auto& d : r.datasets) o["datasets"].push_back(eer_json(d));
  o["pooled"] = ojson::array();
  for (const auto& d : r.pooled) o["pooled"].push_back(eer_json(d));
  if (r.macro_eer) {
    o["macro_eer"] = *r.macro_eer;
    o["macro_eer_percent"] = percent(*r.macro_eer);
  } else {
    o["macro_eer"] = nullptr;
  }
  return o;
}

SeedReport seed_report_from_json(const json& j) {
  SeedReport r;
  r.system_id = j.at("system_id").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& d : j.at("datasets")) r.datasets.push_back(eer_from_json(d));
  if (j.contains("pooled")) {
    for (const auto& d : j.at("pooled")) r.pooled.push_back(eer_from_json(d));
  }
  if (j.contains("macro_eer") && !j.at("macro_eer").is_null()) {
    r.macro_eer = j.at("macro_eer").get<double>();
  }
  return r;
}

void write_seed_report(const fs::path& dir, const SeedReport& r, const ojson& extra) {
  fs::create_directories(dir);
  ojson j = to_json(r);
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) j[k] = v;
  }
  {
    std::ofstream out(dir / "report.json", std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("cannot write " + (dir / "report.json").string());
  }
  StringTable t;
  t.columns = {"system_id", "seed", "dataset", "kind", "n", "eer", "eer_percent"};
  auto add = [&](const DatasetEer& d, const char* kind) {
    t.rows.push_back({r.system_id, std::to_string(r.seed), d.name, std::string(kind),
                      std::to_string(d.n),
                      d.eer ? std::optional<std::string>(format_double(*d.eer)) : std::nullopt,
                      d.eer ? std::optional<std::string>(percent(*d.eer)) : std::nullopt});
  };
  for (const auto& d : r.datasets) add(d, "dataset");
  for (const auto& d : r.pooled) add(d, "pooled");
  if (r.macro_eer) {
    t.rows.push_back({r.system_id, std::to_string(r.seed), std::string("macro"),
                      std::string("macro"), std::to_string(r.datasets.size()),
                      format_double(*r.macro_eer), percent(*r.macro_eer)});
  }
  write_csv(dir / "report.csv", t);
}

SeedStat seed_stat(const std::map<std::uint64_t, double>& per_seed) {
  SeedStat s;
  s.per_seed = per_seed;
  s.n = per_seed.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (const auto& [seed, v] : per_seed) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (const auto& [seed, v] : per_seed) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.std_defined = true;
  }
  return s;
}

EvalReport pool_and_summarize(const ScoreSet& records,
                              const std::vector<std::vector<std::string>>& pooled_sets) {
  if (records.empty()) throw DataError("pool_and_summarize: no records");
  EvalReport rep;
  rep.system_id = records.front().system_id;
  std::map<std::string, std::map<std::uint64_t, ScoreSet>> by;
  std::set<std::uint64_t> seeds;
  for (const auto& r : records) {
    if (r.system_id != rep.system_id) {
      throw DataError("pool_and_summarize: mixed system ids " + rep.system_id + " and " + r.system_id);
    }
    by[r.dataset_name][r.seed].push_back(r);
    seeds.insert(r.seed);
  }
  rep.seeds.assign(seeds.begin(), seeds.end());
  for (const auto& [ds, per] : by) {
    for (auto s : seeds) {
      if (!per.contains(s)) {
        throw DataError("MissingSeedCoverage(" + rep.system_id + ", " + ds + ", " +
                        std::to_string(s) + ")");
      }
    }
  }
  std::map<std::uint64_t, double> macro_seed;
  for (const auto& [ds, per] : by) {
    std::map<std::uint64_t, double> vals;
    for (const auto& [s, set] : per) {
      const auto e = eer_of(set);
      if (!e) throw DataError("dataset " + ds + " seed " + std::to_string(s) + ": EER unavailable");
      vals[s] = e->eer;
      macro_seed[s] += e->eer;
    }
    rep.datasets[ds] = seed_stat(vals);
  }
  double sum = 0.0;
  for (const auto& [ds, st] : rep.datasets) sum += st.mean;
  rep.macro_eer = sum / static_cast<double>(rep.datasets.size());
  for (auto& [s, v] : macro_seed) v /= static_cast<double>(by.size());
  rep.macro_per_seed = seed_stat(macro_seed);

  std::vector<std::vector<std::string>> groups = pooled_sets;
  if (groups.empty()) {
    std::vector<std::string> all;
    for (const auto& [ds, per] : by) all.push_back(ds);
    groups.push_back(all);
  }
  for (const auto& g : groups) {
    std::map<std::uint64_t, double> vals;
    for (auto s : seeds) {
      ScoreSet cat;
      for (const auto& ds : g) {
        auto it = by.find(ds);
        if (it == by.end()) throw ConfigError("pooled set member \"" + ds + "\" has no scores");
        const auto& part = it->second.at(s);
        cat.insert(cat.end(), part.begin(), part.end());
      }
      const auto e = eer_of(cat);
      if (!e) throw DataError("pooled set " + pooled_name(g) + ": EER unavailable");
      vals[s] = e->eer;
    }
    rep.pooled[pooled_name(g)] = seed_stat(vals);
  }
  return rep;
}

ojson to_json(const EvalReport& r) {
  ojson o;
  o["system_id"] = r.system_id;
  o["units"] = "fraction";
  o["seeds"] = r.seeds;
  ojson ds = ojson::object();
  for (const auto& [k, v] : r.datasets) ds[k] = stat_json(v);
  o["datasets"] = ds;
  ojson pooled = ojson::object();
  for (const auto& [k, v] : r.pooled) pooled[k] = stat_json(v);
  o["pooled"] = pooled;
  o["macro_eer"] = r.macro_eer;
  o["macro_eer_percent"] = percent(r.macro_eer);
  o["macro_per_seed"] = stat_json(r.macro_per_seed);
  return o;
}

}  // namespace adf
