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

#include "adf/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "adf/rng.hpp"
#include "adf/yaml_io.hpp"

namespace adf {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Strict view over one mapping: every key must be consumed before finish().
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "must be a mapping");
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* raw(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string str(const std::string& key, std::optional<std::string> def) {
    const json* v = raw(key);
    if (!v) return required(key, def);
    if (!v->is_string()) throw SchemaError(sub(key), "must be a string");
    return v->get<std::string>();
  }

  long long integer(const std::string& key, std::optional<long long> def) {
    const json* v = raw(key);
    if (!v) return required(key, def);
    if (!v->is_number_integer()) throw SchemaError(sub(key), "must be an integer");
    return v->get<long long>();
  }

  double real(const std::string& key, std::optional<double> def) {
    const json* v = raw(key);
    if (!v) return required(key, def);
    if (!v->is_number()) throw SchemaError(sub(key), "must be a number");
    return v->get<double>();
  }

  bool boolean(const std::string& key, std::optional<bool> def) {
    const json* v = raw(key);
    if (!v) return required(key, def);
    if (!v->is_boolean()) throw SchemaError(sub(key), "must be true or false");
    return v->get<bool>();
  }

  std::vector<std::string> str_list(const std::string& key) {
    const json* v = raw(key);
    std::vector<std::string> out;
    if (!v) return out;
    if (!v->is_array()) throw SchemaError(sub(key), "must be a list");
    for (const auto& e : *v) {
      if (!e.is_string()) throw SchemaError(sub(key), "entries must be strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  std::vector<double> real_list(const std::string& key) {
    const json* v = raw(key);
    std::vector<double> out;
    if (!v) return out;
    if (!v->is_array()) throw SchemaError(sub(key), "must be a list");
    for (const auto& e : *v) {
      if (!e.is_number()) throw SchemaError(sub(key), "entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.contains(k)) throw SchemaError(sub(k), "unknown key");
    }
  }

 private:
  template <typename V>
  V required(const std::string& key, const std::optional<V>& def) {
    if (!def) throw SchemaError(sub(key), "required key missing");
    return *def;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

const json kEmpty = json::object();

std::string abs_path(const std::string& p, const fs::path& base) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal().string();
}

// Registry validation with errors re-keyed to the config path.
Params validated(const Registry& registry, ComponentKind kind, const std::string& type,
                 const json* params, const std::string& path) {
  if (params && !params->is_object()) throw SchemaError(path + ".params", "must be a mapping");
  try {
    return registry.validate(kind, type, params ? *params : kEmpty);
  } catch (const RegistryError& e) {
    if (e.code() == RegistryError::Code::param_validation) {
      throw SchemaError(path + ".params" + (e.key().empty() ? "" : "." + e.key()), e.what());
    }
    throw;
  }
}

ComponentSpec parse_component(Reader& parent, const std::string& key, ComponentKind kind,
                              const Registry& registry, Reader* keep_open = nullptr) {
  const json* v = parent.raw(key);
  const std::string path = parent.sub(key);
  if (!v) throw SchemaError(path, "required key missing");
  Reader r(*v, path);
  ComponentSpec spec;
  spec.type = r.str("type", std::nullopt);
  spec.params = validated(registry, kind, spec.type, r.raw("params"), path);
  if (!keep_open) r.finish();
  return spec;
}

TransformParams parse_transform(const json* v, const std::string& path,
                                const TransformParams& def) {
  TransformParams t = def;
  if (!v) return t;
  Reader r(*v, path);
  const long long rate = r.integer("sample_rate", def.sample_rate);
  if (rate < 1 || rate > 1'000'000) throw SchemaError(r.sub("sample_rate"), "must be > 0");
  t.sample_rate = static_cast<int>(rate);
  t.duration_s = r.real("duration_s", def.duration_s);
  if (!(t.duration_s > 0) || !std::isfinite(t.duration_s)) {
    throw SchemaError(r.sub("duration_s"), "must be > 0");
  }
  t.normalize = r.boolean("normalize", def.normalize);
  const std::string pad = r.str("pad_mode", def.pad_mode == PadMode::repeat ? "repeat" : "zeros");
  if (pad == "repeat") t.pad_mode = PadMode::repeat;
  else if (pad == "zeros") t.pad_mode = PadMode::zeros;
  else throw SchemaError(r.sub("pad_mode"), "must be \"repeat\" or \"zeros\"");
  r.finish();
  return t;
}

AugmentSpec parse_augment(const json& v, const std::string& path, const Registry& registry) {
  Reader r(v, path);
  AugmentSpec a;
  const std::string mode = r.str("mode", "sequential");
  if (mode == "sequential") a.mode = AugmentMode::sequential;
  else if (mode == "parallel") a.mode = AugmentMode::parallel;
  else throw SchemaError(r.sub("mode"), "must be \"sequential\" or \"parallel\"");
  const json* items = r.raw("items");
  if (items) {
    if (!items->is_array()) throw SchemaError(r.sub("items"), "must be a list");
    for (std::size_t i = 0; i < items->size(); ++i) {
      const std::string ip = r.sub("items") + "[" + std::to_string(i) + "]";
      Reader ir((*items)[i], ip);
      AugmentItemSpec item;
      item.type = ir.str("type", std::nullopt);
      item.params = validated(registry, ComponentKind::augmentation, item.type, ir.raw("params"), ip);
      item.prob = ir.real("prob", 1.0);
      if (!(item.prob >= 0.0 && item.prob <= 1.0)) throw SchemaError(ir.sub("prob"), "must be in [0, 1]");
      ir.finish();
      a.items.push_back(std::move(item));
    }
  }
  if (a.mode == AugmentMode::parallel && a.items.empty()) {
    throw SchemaError(r.sub("items"), "parallel mode needs at least one item");
  }
  r.finish();
  return a;
}

SplitSpec parse_split(const json& v, const std::string& path, const Registry& registry,
                      const fs::path& base, bool training, const TransformParams& transform_def) {
  Reader r(v, path);
  SplitSpec s;
  s.dataset = parse_component(r, "dataset", ComponentKind::dataset, registry);
  for (const char* key : {"path", "root"}) {
    auto it = s.dataset.params.find(key);
    if (it != s.dataset.params.end() && it->is_string()) {
      *it = abs_path(it->get<std::string>(), base);
    }
  }
  s.transform = parse_transform(r.raw("transform"), r.sub("transform"), transform_def);
  if (const json* aug = r.raw("augment_transform")) {
    if (!training) throw SchemaError(r.sub("augment_transform"), "only the train split augments");
    s.augment = parse_augment(*aug, r.sub("augment_transform"), registry);
  }
  s.loader.shuffle = training;
  if (const json* l = r.raw("loader")) {
    Reader lr(*l, r.sub("loader"));
    const long long b = lr.integer("batch_size", 32);
    if (b < 1 || b > 1'000'000) throw SchemaError(lr.sub("batch_size"), "must be >= 1");
    s.loader.batch_size = static_cast<int>(b);
    s.loader.shuffle = lr.boolean("shuffle", training);
    const long long w = lr.integer("workers", 1);
    if (w < 1 || w > 1024) throw SchemaError(lr.sub("workers"), "must be >= 1");
    s.loader.workers = static_cast<int>(w);
    lr.finish();
  }
  r.finish();
  return s;
}

void parse_model(Reader& top, ModelSpec& m, const Registry& registry) {
  const json* v = top.raw("model");
  if (!v) throw SchemaError("model", "required key missing");
  Reader r(*v, "model");

  const json* fe = r.raw("frontend");
  if (!fe) throw SchemaError("model.frontend", "required key missing");
  {
    Reader fr(*fe, "model.frontend");
    m.frontend.type = fr.str("type", std::nullopt);
    m.frontend.name = fr.str("name", "");
    m.frontend.params = validated(registry, ComponentKind::frontend, m.frontend.type,
                                  fr.raw("params"), "model.frontend");
    const std::string mode = fr.str("mode", "finetune");
    if (mode == "finetune") m.frontend_mode = FrontEndMode::finetune;
    else if (mode == "frozen") m.frontend_mode = FrontEndMode::frozen;
    else throw SchemaError("model.frontend.mode", "must be \"frozen\" or \"finetune\"");
    const std::string agg = fr.str("aggregation", "last");
    try {
      m.aggregation = parse_aggregation(agg);
    } catch (const ConfigError&) {
      throw SchemaError("model.frontend.aggregation",
                        "UnknownMethod(\"" + agg + "\"); expected last, weighted_sum or attentive");
    }
    const long long h = fr.integer("attention_hidden", 32);
    if (h < 1 || h > 4096) throw SchemaError("model.frontend.attention_hidden", "must be >= 1");
    m.attention_hidden = static_cast<int>(h);
    fr.finish();
  }
  {
    const json* be = r.raw("backend");
    if (!be) throw SchemaError("model.backend", "required key missing");
    Reader br(*be, "model.backend");
    m.backend.type = br.str("type", std::nullopt);
    m.backend.name = br.str("name", "");
    m.backend.params = validated(registry, ComponentKind::backend, m.backend.type,
                                 br.raw("params"), "model.backend");
    br.finish();
  }
  m.loss = parse_component(r, "loss", ComponentKind::loss, registry);
  r.finish();

  // Constructors reject semantically invalid params (e.g. margins).
  auto guard = [](const std::string& path, auto&& make) {
    try {
      make();
    } catch (const RegistryError&) {
      throw;
    } catch (const ConfigError& e) {
      throw SchemaError(path, e.what());
    }
  };
  guard("model.frontend.params",
        [&] { registry.make_frontend<double>(m.frontend.type, m.frontend.params); });
  guard("model.backend.params",
        [&] { registry.make_backend<double>(m.backend.type, m.backend.params); });
  guard("model.loss.params", [&] { registry.make_loss<double>(m.loss.type, m.loss.params); });
}

void parse_training(Reader& top, TrainSection& t) {
  const json* v = top.raw("training");
  if (!v) return;
  Reader r(*v, "training");
  t.optimizer = r.str("optimizer", "adam");
  if (t.optimizer != "adam") throw SchemaError("training.optimizer", "only \"adam\" is supported");
  t.lr = r.real("lr", t.lr);
  if (!(t.lr > 0) || !std::isfinite(t.lr)) throw SchemaError("training.lr", "must be > 0");
  const long long epochs = r.integer("max_epochs", t.max_epochs);
  if (epochs < 1 || epochs > 1'000'000) throw SchemaError("training.max_epochs", "must be >= 1");
  t.max_epochs = static_cast<int>(epochs);
  if (const json* vi = r.raw("val_interval")) {
    if (vi->is_string() && vi->get<std::string>() == "epoch") {
      t.val_interval = 0;
    } else if (vi->is_number_integer() && vi->get<long long>() >= 1 &&
               vi->get<long long>() <= 1'000'000'000) {
      t.val_interval = static_cast<int>(vi->get<long long>());
    } else {
      throw SchemaError("training.val_interval", "must be an integer >= 1 or \"epoch\"");
    }
  }
  const long long patience = r.integer("patience", t.patience);
  if (patience < 1 || patience > 1'000'000) throw SchemaError("training.patience", "must be >= 1");
  t.patience = static_cast<int>(patience);
  t.min_delta = r.real("min_delta", t.min_delta);
  if (!(t.min_delta >= 0) || !std::isfinite(t.min_delta)) {
    throw SchemaError("training.min_delta", "must be >= 0");
  }
  if (const json* c = r.raw("checkpoint")) {
    Reader cr(*c, "training.checkpoint");
    const long long k = cr.integer("keep_every", 0);
    if (k < 0 || k > 1'000'000) throw SchemaError("training.checkpoint.keep_every", "must be >= 0");
    t.keep_every = static_cast<int>(k);
    cr.finish();
  }
  const std::string prec = r.str("precision", "float32");
  if (prec == "float32") t.precision = Precision::float32;
  else if (prec == "float64") t.precision = Precision::float64;
  else throw SchemaError("training.precision", "must be \"float32\" or \"float64\"");
  r.finish();
}

void parse_evaluation(Reader& top, ExperimentConfig& cfg, const Registry& registry,
                      const fs::path& base) {
  const json* v = top.raw("evaluation");
  if (!v) return;
  Reader r(*v, "evaluation");
  EvalSection& e = cfg.evaluation;
  TransformParams tdef;
  if (cfg.data.test) tdef = cfg.data.test->transform;
  else if (cfg.data.valid) tdef = cfg.data.valid->transform;
  else if (cfg.data.train) tdef = cfg.data.train->transform;
  if (const json* ts = r.raw("test_sets")) {
    if (!ts->is_array()) throw SchemaError("evaluation.test_sets", "must be a list");
    for (std::size_t i = 0; i < ts->size(); ++i) {
      e.test_sets.push_back(parse_split((*ts)[i], "evaluation.test_sets[" + std::to_string(i) + "]",
                                        registry, base, false, tdef));
    }
  }
  if (const json* f = r.raw("fairness")) {
    Reader fr(*f, "evaluation.fairness");
    FairnessSection& fs_ = e.fairness;
    fs_.attributes = fr.str_list("attributes");
    for (const auto& a : fs_.attributes) {
      if (a != "gender" && a != "language" && a != "quality_pesq" && a != "quality_nisqa") {
        throw SchemaError("evaluation.fairness.attributes",
                          "unknown attribute \"" + a +
                              "\"; expected gender, language, quality_pesq or quality_nisqa");
      }
    }
    if (const json* qb = fr.raw("quality_bands")) {
      Reader qr(*qb, "evaluation.fairness.quality_bands");
      const long long q = qr.integer("quantiles", 4);
      if (q < 2 || q > 1000) {
        throw SchemaError("evaluation.fairness.quality_bands.quantiles", "must be >= 2");
      }
      fs_.quantiles = static_cast<int>(q);
      fs_.pesq_edges = qr.real_list("pesq_edges");
      fs_.nisqa_edges = qr.real_list("nisqa_edges");
      for (const auto* edges : {&fs_.pesq_edges, &fs_.nisqa_edges}) {
        for (std::size_t i = 1; i < edges->size(); ++i) {
          if (!((*edges)[i - 1] < (*edges)[i])) {
            throw SchemaError("evaluation.fairness.quality_bands", "edges must be strictly increasing");
          }
        }
      }
      qr.finish();
    }
    fs_.alpha = fr.real("alpha", 0.5);
    if (!(fs_.alpha >= 0 && fs_.alpha <= 1)) {
      throw SchemaError("evaluation.fairness.alpha", "must be in [0, 1]");
    }
    fs_.mode = fr.str("mode", "far_frr_gini");
    if (fs_.mode != "far_frr_gini" && fs_.mode != "eer_gini") {
      throw SchemaError("evaluation.fairness.mode", "must be \"far_frr_gini\" or \"eer_gini\"");
    }
    fs_.include_unknown = fr.boolean("include_unknown", false);
    fr.finish();
  }
  if (const json* ps = r.raw("pooled_sets")) {
    if (!ps->is_array()) throw SchemaError("evaluation.pooled_sets", "must be a list of name lists");
    for (const auto& group : *ps) {
      if (!group.is_array() || group.empty()) {
        throw SchemaError("evaluation.pooled_sets", "each entry must be a non-empty list of names");
      }
      std::vector<std::string> names;
      for (const auto& n : group) {
        if (!n.is_string()) throw SchemaError("evaluation.pooled_sets", "names must be strings");
        names.push_back(n.get<std::string>());
      }
      e.pooled_sets.push_back(std::move(names));
    }
  }
  r.finish();
}

ojson reorder(const json& j) { return ojson::parse(j.dump()); }

ojson component_json(const ComponentSpec& c) {
  ojson o;
  o["type"] = c.type;
  if (!c.name.empty()) o["name"] = c.name;
  o["params"] = reorder(c.params);
  return o;
}

ojson split_json(const SplitSpec& s) {
  ojson o;
  o["dataset"] = component_json(s.dataset);
  o["transform"] = {{"sample_rate", s.transform.sample_rate},
                    {"duration_s", s.transform.duration_s},
                    {"normalize", s.transform.normalize},
                    {"pad_mode", s.transform.pad_mode == PadMode::repeat ? "repeat" : "zeros"}};
  if (s.augment) {
    ojson a;
    a["mode"] = to_string(s.augment->mode);
    a["items"] = ojson::array();
    for (const auto& item : s.augment->items) {
      ojson it;
      it["type"] = item.type;
      it["params"] = reorder(item.params);
      it["prob"] = item.prob;
      a["items"].push_back(it);
    }
    o["augment_transform"] = a;
  }
  o["loader"] = {{"batch_size", s.loader.batch_size},
                 {"shuffle", s.loader.shuffle},
                 {"workers", s.loader.workers}};
  return o;
}

}  // namespace

std::string to_string(AugmentMode m) {
  return m == AugmentMode::sequential ? "sequential" : "parallel";
}
std::string to_string(Precision p) { return p == Precision::float32 ? "float32" : "float64"; }
std::string to_string(FrontEndMode m) { return m == FrontEndMode::frozen ? "frozen" : "finetune"; }

std::vector<SplitSpec> ExperimentConfig::test_splits() const {
  if (!evaluation.test_sets.empty()) return evaluation.test_sets;
  if (data.test) return {*data.test};
  return {};
}

ExperimentConfig ExperimentConfig::for_seed(std::uint64_t seed) const {
  ExperimentConfig c = *this;
  c.seeds = {seed};
  return c;
}

ExperimentConfig parse_config(const json& doc, Registry& registry, const fs::path& base_dir) {
  Reader top(doc, "");
  ExperimentConfig cfg;
  cfg.exp_name = top.str("exp_name", cfg.exp_name);
  if (cfg.exp_name.empty() || cfg.exp_name.find('/') != std::string::npos ||
      cfg.exp_name == "." || cfg.exp_name == "..") {
    throw SchemaError("exp_name", "must be a non-empty name without '/'");
  }
  cfg.output_dir = abs_path(top.str("output_dir", "runs"), base_dir);

  if (const json* s = top.raw("seed")) {
    auto one = [](const json& e) {
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        throw SchemaError("seed", "must be a non-negative integer or a list of them");
      }
      return e.get<std::uint64_t>();
    };
    cfg.seeds.clear();
    if (s->is_array()) {
      for (const auto& e : *s) cfg.seeds.push_back(one(e));
      if (cfg.seeds.empty()) throw SchemaError("seed", "list must not be empty");
      const std::set<std::uint64_t> uniq(cfg.seeds.begin(), cfg.seeds.end());
      if (uniq.size() != cfg.seeds.size()) throw SchemaError("seed", "list has duplicates");
    } else {
      cfg.seeds.push_back(one(*s));
    }
  }

  for (auto& p : top.str_list("plugins")) cfg.plugins.push_back(abs_path(p, base_dir));
  for (const auto& p : cfg.plugins) load_plugin(registry, p);

  if (const json* d = top.raw("data")) {
    Reader dr(*d, "data");
    if (const json* t = dr.raw("train")) {
      cfg.data.train = parse_split(*t, "data.train", registry, base_dir, true, {});
    }
    if (const json* v = dr.raw("valid")) {
      cfg.data.valid = parse_split(*v, "data.valid", registry, base_dir, false, {});
    }
    if (const json* t = dr.raw("test")) {
      cfg.data.test = parse_split(*t, "data.test", registry, base_dir, false, {});
    }
    dr.finish();
  }
  parse_model(top, cfg.model, registry);
  parse_training(top, cfg.training);
  parse_evaluation(top, cfg, registry, base_dir);
  top.finish();
  return cfg;
}

ExperimentConfig load_config_text(const std::string& text, Registry& registry,
                                  const fs::path& base_dir) {
  return parse_config(parse_yaml(text), registry, base_dir);
}

ExperimentConfig load_config(const fs::path& path, Registry& registry) {
  const json doc = parse_yaml_file(path);
  return parse_config(doc, registry, fs::absolute(path).parent_path());
}

ojson to_json(const ExperimentConfig& cfg) {
  ojson o;
  o["exp_name"] = cfg.exp_name;
  o["output_dir"] = cfg.output_dir.string();
  if (cfg.seeds.size() == 1) o["seed"] = cfg.seeds.front();
  else o["seed"] = cfg.seeds;
  o["plugins"] = cfg.plugins;
  ojson data = ojson::object();
  if (cfg.data.train) data["train"] = split_json(*cfg.data.train);
  if (cfg.data.valid) data["valid"] = split_json(*cfg.data.valid);
  if (cfg.data.test) data["test"] = split_json(*cfg.data.test);
  o["data"] = data;

  ojson model;
  model["frontend"] = component_json(cfg.model.frontend);
  model["frontend"]["mode"] = to_string(cfg.model.frontend_mode);
  model["frontend"]["aggregation"] = to_string(cfg.model.aggregation);
  model["frontend"]["attention_hidden"] = cfg.model.attention_hidden;
  model["backend"] = component_json(cfg.model.backend);
  model["loss"] = component_json(cfg.model.loss);
  o["model"] = model;

  const auto& t = cfg.training;
  ojson tr;
  tr["optimizer"] = t.optimizer;
  tr["lr"] = t.lr;
  tr["max_epochs"] = t.max_epochs;
  if (t.val_interval == 0) tr["val_interval"] = "epoch";
  else tr["val_interval"] = t.val_interval;
  tr["patience"] = t.patience;
  tr["min_delta"] = t.min_delta;
  tr["checkpoint"] = {{"keep_every", t.keep_every}};
  tr["precision"] = to_string(t.precision);
  o["training"] = tr;

  const auto& e = cfg.evaluation;
  ojson ev;
  ev["test_sets"] = ojson::array();
  for (const auto& s : e.test_sets) ev["test_sets"].push_back(split_json(s));
  ojson fair;
  fair["attributes"] = e.fairness.attributes;
  fair["quality_bands"] = {{"quantiles", e.fairness.quantiles},
                           {"pesq_edges", e.fairness.pesq_edges},
                           {"nisqa_edges", e.fairness.nisqa_edges}};
  fair["alpha"] = e.fairness.alpha;
  fair["mode"] = e.fairness.mode;
  fair["include_unknown"] = e.fairness.include_unknown;
  ev["fairness"] = fair;
  ev["pooled_sets"] = e.pooled_sets;
  o["evaluation"] = ev;
  return o;
}

std::string to_yaml(const ExperimentConfig& cfg) { return emit_yaml(to_json(cfg)); }

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_yaml(cfg))));
  return buf;
}

std::string encode_field(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '_' || c == '.' || c == '+') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::string decode_field(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::vector<std::string> split_system_id(const std::string& id) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = id.find('-', start);
    parts.push_back(decode_field(id.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw ConfigError("malformed system id \"" + id + "\"");
  return parts;
}

std::string training_set_name(const ExperimentConfig& cfg) {
  if (!cfg.data.train) return "none";
  const auto& d = cfg.data.train->dataset;
  if (auto it = d.params.find("name"); it != d.params.end() && it->is_string() &&
                                       !it->get<std::string>().empty()) {
    return it->get<std::string>();
  }
  if (auto it = d.params.find("path"); it != d.params.end() && it->is_string()) {
    return fs::path(it->get<std::string>()).stem().string();
  }
  return d.type;
}

std::string system_id(const ExperimentConfig& cfg) {
  auto shown = [](const ComponentSpec& c) { return c.name.empty() ? c.type : c.name; };
  return encode_field(shown(cfg.model.frontend)) + "-" + encode_field(shown(cfg.model.backend)) + "-" +
         encode_field(training_set_name(cfg));
}

}  // namespace adf
