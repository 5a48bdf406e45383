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

#include "adf/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "adf/error.hpp"
#include "adf/evaluator.hpp"
#include "adf/table_io.hpp"
#include "adf/yaml_io.hpp"

namespace adf {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const char* const kAxes[] = {"frontend", "backend", "training_set"};

std::string value_name(const json& v, const std::string& where) {
  if (v.is_object()) {
    if (v.contains("name") && v["name"].is_string()) return v["name"].get<std::string>();
    if (v.contains("type") && v["type"].is_string()) return v["type"].get<std::string>();
    throw SchemaError(where, "axis values that are mappings need a name or type");
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  throw SchemaError(where, "axis values must be strings, integers or mappings");
}

json field_of(const json& v, const std::string& field) {
  if (!v.is_object()) {
    if (field == "name" || field == "type") return v;
    return nullptr;
  }
  if (field == "name") return value_name(v, "");
  auto it = v.find(field);
  return it == v.end() ? json(nullptr) : *it;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

json bind_template(const json& templ, const std::map<std::string, json>& values) {
  auto lookup = [&](const std::string& ref) -> json {
    const auto dot = ref.find('.');
    const std::string axis = ref.substr(0, dot);
    auto it = values.find(axis);
    if (it == values.end()) throw SchemaError("template", "unbound placeholder ${" + ref + "}");
    if (dot == std::string::npos) return it->second;
    json f = field_of(it->second, ref.substr(dot + 1));
    if (f.is_null()) throw SchemaError("template", "axis value has no field for ${" + ref + "}");
    return f;
  };
  if (templ.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : templ.items()) out[k] = bind_template(v, values);
    return out;
  }
  if (templ.is_array()) {
    json out = json::array();
    for (const auto& v : templ) out.push_back(bind_template(v, values));
    return out;
  }
  if (!templ.is_string()) return templ;
  const std::string s = templ.get<std::string>();
  if (s.size() > 3 && s.rfind("${", 0) == 0 && s.back() == '}' &&
      s.find("${", 2) == std::string::npos) {
    return lookup(s.substr(2, s.size() - 3));
  }
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto open = s.find("${", i);
    if (open == std::string::npos) {
      out += s.substr(i);
      break;
    }
    const auto close = s.find('}', open);
    if (close == std::string::npos) throw SchemaError("template", "unterminated placeholder in \"" + s + "\"");
    out += s.substr(i, open - i);
    const json v = lookup(s.substr(open + 2, close - open - 2));
    if (v.is_object() || v.is_array()) {
      throw SchemaError("template", "cannot splice a mapping into \"" + s + "\"");
    }
    out += scalar_text(v);
    i = close + 1;
  }
  return out;
}

MatrixSpec parse_matrix(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw SchemaError("<root>", "must be a mapping");
  MatrixSpec m;
  m.base_dir = fs::absolute(base_dir);
  for (const auto& [k, v] : doc.items()) {
    if (k != "name" && k != "output_root" && k != "axes" && k != "template") {
      throw SchemaError(k, "unknown key");
    }
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
      throw SchemaError("name", "must be a non-empty string");
    }
    m.name = doc["name"].get<std::string>();
  }
  if (m.name.find('/') != std::string::npos) throw SchemaError("name", "must not contain '/'");
  fs::path root = "runs";
  if (doc.contains("output_root")) {
    if (!doc["output_root"].is_string()) throw SchemaError("output_root", "must be a path");
    root = doc["output_root"].get<std::string>();
  }
  m.output_root = root.is_absolute() ? root : (m.base_dir / root).lexically_normal();
  if (!doc.contains("axes") || !doc["axes"].is_object()) throw SchemaError("axes", "required mapping");
  const json& axes = doc["axes"];
  for (const auto& [k, v] : axes.items()) {
    if (k != "frontend" && k != "backend" && k != "training_set" && k != "seed") {
      throw SchemaError("axes." + k, "unknown axis (expected frontend, backend, training_set, seed)");
    }
    if (!v.is_array() || v.empty()) throw SchemaError("axes." + k, "must be a non-empty list");
  }
  for (const char* a : kAxes) {
    if (!axes.contains(a)) throw SchemaError(std::string("axes.") + a, "required axis missing");
    auto& dst = std::string(a) == "frontend" ? m.frontend
                : std::string(a) == "backend" ? m.backend
                                              : m.training_set;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < axes[a].size(); ++i) {
      const std::string where = std::string("axes.") + a + "[" + std::to_string(i) + "]";
      const std::string n = value_name(axes[a][i], where);
      if (!seen.insert(n).second) throw SchemaError(where, "duplicate axis value \"" + n + "\"");
      dst.push_back(axes[a][i]);
    }
  }
  if (axes.contains("seed")) {
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < axes["seed"].size(); ++i) {
      const auto& s = axes["seed"][i];
      const std::string where = "axes.seed[" + std::to_string(i) + "]";
      if (!s.is_number_integer() || s.get<long long>() < 0) throw SchemaError(where, "must be an integer >= 0");
      if (!seen.insert(s.get<std::uint64_t>()).second) throw SchemaError(where, "duplicate seed");
      m.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  if (!doc.contains("template") || !doc["template"].is_object()) {
    throw SchemaError("template", "required mapping");
  }
  m.templ = doc["template"];
  return m;
}

MatrixSpec load_matrix(const fs::path& path) {
  return parse_matrix(parse_yaml_file(path), fs::absolute(path).parent_path());
}

std::string seed_dir_name(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::optional<std::uint64_t> parse_seed_dir(const std::string& name) {
  if (name.rfind("seed_", 0) != 0 || name.size() == 5) return std::nullopt;
  std::uint64_t v = 0;
  for (std::size_t i = 5; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(name[i] - '0');
  }
  if (seed_dir_name(v) != name) return std::nullopt;  // no leading zeros
  return v;
}

ojson to_json(const GridInfo& g) {
  ojson o;
  o["name"] = g.name;
  o["axes"] = {{"frontend", g.frontends},
               {"backend", g.backends},
               {"training_set", g.training_sets},
               {"seed", g.seeds}};
  o["cells"] = ojson::array();
  for (const auto& c : g.cells) {
    o["cells"].push_back({{"system_id", c.system_id},
                          {"frontend", c.frontend},
                          {"backend", c.backend},
                          {"training_set", c.training_set},
                          {"config", c.config_path.string()},
                          {"run_root", c.run_root.string()},
                          {"seeds", c.seeds}});
  }
  return o;
}

GridInfo grid_from_json(const json& j) {
  try {
    GridInfo g;
    g.name = j.at("name").get<std::string>();
    const auto& a = j.at("axes");
    g.frontends = a.at("frontend").get<std::vector<std::string>>();
    g.backends = a.at("backend").get<std::vector<std::string>>();
    g.training_sets = a.at("training_set").get<std::vector<std::string>>();
    g.seeds = a.at("seed").get<std::vector<std::uint64_t>>();
    for (const auto& c : j.at("cells")) {
      MatrixCell cell;
      cell.system_id = c.at("system_id").get<std::string>();
      cell.frontend = c.at("frontend").get<std::string>();
      cell.backend = c.at("backend").get<std::string>();
      cell.training_set = c.at("training_set").get<std::string>();
      cell.config_path = c.at("config").get<std::string>();
      cell.run_root = c.at("run_root").get<std::string>();
      cell.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
      g.cells.push_back(std::move(cell));
    }
    return g;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed grid file: ") + e.what());
  }
}

namespace {

void write_text(const fs::path& p, const std::string& text) {
  if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw DataError("cannot write " + p.string());
}

}  // namespace

GridInfo expand_matrix(const MatrixSpec& spec, Registry& registry, const fs::path& out_dir) {
  GridInfo g;
  g.name = spec.name;
  for (const auto& v : spec.frontend) g.frontends.push_back(value_name(v, "axes.frontend"));
  for (const auto& v : spec.backend) g.backends.push_back(value_name(v, "axes.backend"));
  for (const auto& v : spec.training_set) g.training_sets.push_back(value_name(v, "axes.training_set"));

  const fs::path exp_root = spec.output_root / spec.name;
  std::vector<std::pair<std::string, ExperimentConfig>> configs;
  std::set<std::string> ids;
  for (std::size_t f = 0; f < spec.frontend.size(); ++f) {
    for (std::size_t b = 0; b < spec.backend.size(); ++b) {
      for (std::size_t t = 0; t < spec.training_set.size(); ++t) {
        std::map<std::string, json> values = {{"frontend", spec.frontend[f]},
                                              {"backend", spec.backend[b]},
                                              {"training_set", spec.training_set[t]}};
        json doc = bind_template(spec.templ, values);
        if (!spec.seeds.empty()) doc["seed"] = spec.seeds;
        doc["exp_name"] = "cell";  // placeholder until the system id is known
        doc["output_dir"] = exp_root.string();
        const std::string where = g.frontends[f] + "/" + g.backends[b] + "/" + g.training_sets[t];
        ExperimentConfig cfg;
        try {
          cfg = parse_config(doc, registry, spec.base_dir);
        } catch (const ConfigError& e) {
          throw ConfigError("matrix cell " + where + ": " + e.what());
        }
        const std::string id = system_id(cfg);
        const std::string want = encode_field(g.frontends[f]) + "-" + encode_field(g.backends[b]) +
                                 "-" + encode_field(g.training_sets[t]);
        if (id != want) {
          throw ConfigError("matrix cell " + where + ": system id \"" + id + "\" does not match axis names \"" +
                            want + "\"; bind name fields (model.frontend.name, model.backend.name, "
                            "dataset params.name) to the axis values");
        }
        if (!ids.insert(id).second) throw ConfigError("matrix cells collide on system id " + id);
        cfg.exp_name = id;
        MatrixCell cell;
        cell.system_id = id;
        cell.frontend = g.frontends[f];
        cell.backend = g.backends[b];
        cell.training_set = g.training_sets[t];
        cell.config_path = fs::absolute(out_dir / (id + ".yaml"));
        cell.run_root = exp_root / id;
        cell.seeds = cfg.seeds;
        if (g.seeds.empty()) g.seeds = cfg.seeds;
        else if (g.seeds != cfg.seeds) throw ConfigError("matrix cell " + where + ": seeds differ between cells");
        g.cells.push_back(cell);
        configs.emplace_back(cell.config_path.string(), std::move(cfg));
      }
    }
  }
  // Nothing is written until every cell validated.
  for (const auto& [path, cfg] : configs) write_text(path, to_yaml(cfg));
  const std::string grid = to_json(g).dump(2) + "\n";
  write_text(out_dir / "grid.json", grid);
  write_text(exp_root / "grid.json", grid);
  return g;
}

namespace {

template <typename K>
void add_unique(std::vector<K>& v, const K& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::optional<std::string> num(double v) { return format_double(v); }

}  // namespace

AggregateResult collect_reports(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError("run root " + root.string() + " is not a directory");
  AggregateResult agg;
  std::optional<GridInfo> grid;
  if (fs::exists(root / "grid.json")) {
    std::ifstream in(root / "grid.json");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw DataError("malformed " + (root / "grid.json").string() + ": " + e.what());
    }
    grid = grid_from_json(j);
  }

  std::vector<fs::path> reports;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() != "report.json") continue;
    const fs::path eval = e.path().parent_path();
    if (eval.filename() != "eval") continue;
    if (!parse_seed_dir(eval.parent_path().filename().string())) continue;
    reports.push_back(e.path());
  }
  std::sort(reports.begin(), reports.end());

  std::set<std::string> seen_cells;
  for (const auto& p : reports) {
    std::ifstream in(p);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw DataError("malformed report " + p.string() + ": " + e.what());
    }
    SeedReport r;
    try {
      r = seed_report_from_json(j);
    } catch (const json::exception& e) {
      throw DataError("malformed report " + p.string() + ": " + e.what());
    }
    const auto parts = split_system_id(r.system_id);
    for (const auto& d : r.datasets) {
      if (!d.eer) continue;
      LongRow row{r.system_id, parts[0], parts[1], parts[2], d.name, r.seed, *d.eer};
      const std::string key = r.system_id + "|" + std::to_string(r.seed) + "|" + d.name;
      if (!seen_cells.insert(key).second) {
        throw DataError("duplicate report for " + r.system_id + " seed " + std::to_string(r.seed) +
                        " dataset " + d.name + " (" + p.string() + ")");
      }
      agg.rows.push_back(std::move(row));
    }
  }
  if (agg.rows.empty()) throw IncompleteGridError("IncompleteGrid: no EER reports under " + root.string());

  if (grid) {
    agg.frontends = grid->frontends;
    agg.backends = grid->backends;
    agg.training_sets = grid->training_sets;
    agg.seeds = grid->seeds;
  } else {
    std::set<std::string> f, b, t;
    std::set<std::uint64_t> s;
    for (const auto& r : agg.rows) {
      f.insert(r.frontend);
      b.insert(r.backend);
      t.insert(r.training_set);
      s.insert(r.seed);
    }
    agg.frontends.assign(f.begin(), f.end());
    agg.backends.assign(b.begin(), b.end());
    agg.training_sets.assign(t.begin(), t.end());
    agg.seeds.assign(s.begin(), s.end());
  }
  std::set<std::string> ds;
  for (const auto& r : agg.rows) ds.insert(r.dataset);
  agg.datasets.assign(ds.begin(), ds.end());

  std::vector<std::string> missing;
  for (const auto& f : agg.frontends) {
    for (const auto& b : agg.backends) {
      for (const auto& t : agg.training_sets) {
        const std::string id = encode_field(f) + "-" + encode_field(b) + "-" + encode_field(t);
        for (auto s : agg.seeds) {
          for (const auto& d : agg.datasets) {
            if (!seen_cells.contains(id + "|" + std::to_string(s) + "|" + d)) {
              missing.push_back(id + "/" + seed_dir_name(s) + "/" + d);
            }
          }
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "IncompleteGrid: " + std::to_string(missing.size()) + " missing cell(s):";
    for (const auto& m : missing) msg += " " + m;
    throw IncompleteGridError(msg);
  }
  const std::size_t expected = agg.frontends.size() * agg.backends.size() *
                               agg.training_sets.size() * agg.seeds.size() * agg.datasets.size();
  if (agg.rows.size() != expected) {
    throw IncompleteGridError("IncompleteGrid: reports outside the grid axes under " + root.string());
  }
  std::sort(agg.rows.begin(), agg.rows.end(), [](const LongRow& a, const LongRow& b) {
    return std::tie(a.system_id, a.dataset, a.seed) < std::tie(b.system_id, b.dataset, b.seed);
  });
  return agg;
}

void write_aggregates(const AggregateResult& agg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  auto id_of = [](const std::string& f, const std::string& b, const std::string& t) {
    return encode_field(f) + "-" + encode_field(b) + "-" + encode_field(t);
  };
  std::map<std::tuple<std::string, std::string, std::uint64_t>, double> eer;  // (system, dataset, seed)
  for (const auto& r : agg.rows) eer[{r.system_id, r.dataset, r.seed}] = r.eer;

  // (a) long format
  StringTable lt;
  lt.columns = {"system_id", "frontend", "backend", "training_set", "dataset", "seed", "eer"};
  for (const auto& r : agg.rows) {
    lt.rows.push_back({r.system_id, r.frontend, r.backend, r.training_set, r.dataset,
                       std::to_string(r.seed), num(r.eer)});
  }
  write_csv(out_dir / "long.csv", lt);

  struct System {
    std::string id, f, b, t;
  };
  std::vector<System> systems;
  for (const auto& f : agg.frontends) {
    for (const auto& b : agg.backends) {
      for (const auto& t : agg.training_sets) systems.push_back({id_of(f, b, t), f, b, t});
    }
  }

  // (b) seed means, and the per-seed macro layer
  std::map<std::pair<std::string, std::string>, double> seed_mean;  // (system, dataset)
  std::map<std::string, double> macro;                              // system
  StringTable st;
  st.columns = {"system_id", "frontend", "backend", "training_set", "dataset", "n_seeds", "eer_mean",
                "eer_std"};
  StringTable ps;
  ps.columns = {"system_id", "frontend", "backend", "training_set", "seed", "macro_eer"};
  for (const auto& s : systems) {
    std::vector<double> dataset_means;
    for (const auto& d : agg.datasets) {
      std::map<std::uint64_t, double> per;
      for (auto seed : agg.seeds) per[seed] = eer.at({s.id, d, seed});
      const SeedStat stat = seed_stat(per);
      seed_mean[{s.id, d}] = stat.mean;
      dataset_means.push_back(stat.mean);
      st.rows.push_back({s.id, s.f, s.b, s.t, d, std::to_string(stat.n), num(stat.mean),
                         stat.std_defined ? num(stat.std) : std::nullopt});
    }
    macro[s.id] = mean_of(dataset_means);
    for (auto seed : agg.seeds) {
      std::vector<double> v;
      for (const auto& d : agg.datasets) v.push_back(eer.at({s.id, d, seed}));
      ps.rows.push_back({s.id, s.f, s.b, s.t, std::to_string(seed), num(mean_of(v))});
    }
  }
  write_csv(out_dir / "seed_mean.csv", st);
  write_csv(out_dir / "per_seed.csv", ps);

  // (c) front-end x dataset heatmap over back-ends and training sets
  StringTable ht;
  ht.columns = {"frontend"};
  for (const auto& d : agg.datasets) ht.columns.push_back(d);
  for (const auto& f : agg.frontends) {
    std::vector<std::optional<std::string>> row = {f};
    for (const auto& d : agg.datasets) {
      std::vector<double> v;
      for (const auto& s : systems) {
        if (s.f == f) v.push_back(seed_mean.at({s.id, d}));
      }
      row.push_back(num(mean_of(v)));
    }
    ht.rows.push_back(std::move(row));
  }
  write_csv(out_dir / "heatmap.csv", ht);

  // (d) per-front-end distribution of system macro EERs
  StringTable bt;
  bt.columns = {"frontend", "system_id", "macro_eer"};
  for (const auto& f : agg.frontends) {
    for (const auto& s : systems) {
      if (s.f == f) bt.rows.push_back({f, s.id, num(macro.at(s.id))});
    }
  }
  write_csv(out_dir / "boxplot.csv", bt);

  // (e) front-end x back-end marginal table over training sets
  StringTable mt;
  mt.columns = {"frontend"};
  for (const auto& b : agg.backends) mt.columns.push_back(b);
  mt.columns.push_back("mean");
  std::map<std::pair<std::string, std::string>, double> cell;
  for (const auto& f : agg.frontends) {
    for (const auto& b : agg.backends) {
      std::vector<double> v;
      for (const auto& t : agg.training_sets) v.push_back(macro.at(id_of(f, b, t)));
      cell[{f, b}] = mean_of(v);
    }
  }
  for (const auto& f : agg.frontends) {
    std::vector<std::optional<std::string>> row = {f};
    std::vector<double> v;
    for (const auto& b : agg.backends) {
      row.push_back(num(cell.at({f, b})));
      v.push_back(cell.at({f, b}));
    }
    row.push_back(num(mean_of(v)));
    mt.rows.push_back(std::move(row));
  }
  {
    std::vector<std::optional<std::string>> row = {std::string("mean")};
    std::vector<double> all;
    for (const auto& b : agg.backends) {
      std::vector<double> v;
      for (const auto& f : agg.frontends) v.push_back(cell.at({f, b}));
      row.push_back(num(mean_of(v)));
      all.insert(all.end(), v.begin(), v.end());
    }
    row.push_back(num(mean_of(all)));
    mt.rows.push_back(std::move(row));
  }
  write_csv(out_dir / "marginal.csv", mt);

  ojson mm;
  mm["units"] = "fraction";
  auto factor = [&](const std::vector<std::string>& levels, auto pick) {
    ojson o = ojson::object();
    for (const auto& level : levels) {
      std::vector<double> v;
      for (const auto& s : systems) {
        if (pick(s) == level) v.push_back(macro.at(s.id));
      }
      o[level] = mean_of(v);
    }
    return o;
  };
  mm["frontend"] = factor(agg.frontends, [](const System& s) { return s.f; });
  mm["backend"] = factor(agg.backends, [](const System& s) { return s.b; });
  mm["training_set"] = factor(agg.training_sets, [](const System& s) { return s.t; });
  ojson dsm = ojson::object();
  for (const auto& d : agg.datasets) {
    std::vector<double> v;
    for (const auto& s : systems) v.push_back(seed_mean.at({s.id, d}));
    dsm[d] = mean_of(v);
  }
  mm["dataset"] = dsm;
  std::vector<double> all;
  for (const auto& s : systems) all.push_back(macro.at(s.id));
  mm["grand_mean"] = mean_of(all);
  write_text(out_dir / "marginal_means.json", mm.dump(2) + "\n");
}

}  // namespace adf
