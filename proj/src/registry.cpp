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

#include "adf/registry.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <sstream>

namespace adf {

namespace {

std::size_t index(ComponentKind kind) { return static_cast<std::size_t>(kind); }

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out.empty() ? "<none>" : out;
}

// First member of the kind's base interface, used to name a mismatch.
const char* required_member(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::frontend: return "layer_count";
    case ComponentKind::backend: return "forward";
    case ComponentKind::loss: return "scores";
    case ComponentKind::augmentation: return "apply";
    case ComponentKind::dataset: return "records";
  }
  return "forward";
}

bool ctor_matches(ComponentKind kind, const Constructor& ctor) {
  switch (kind) {
    case ComponentKind::frontend: {
      auto* c = std::get_if<FrontEndCtor>(&ctor);
      return c && c->f32 && c->f64;
    }
    case ComponentKind::backend: {
      auto* c = std::get_if<BackEndCtor>(&ctor);
      return c && c->f32 && c->f64;
    }
    case ComponentKind::loss: {
      auto* c = std::get_if<LossCtor>(&ctor);
      return c && c->f32 && c->f64;
    }
    case ComponentKind::augmentation: {
      auto* c = std::get_if<AugmentationCtor>(&ctor);
      return c && c->make;
    }
    case ComponentKind::dataset: {
      auto* c = std::get_if<DatasetCtor>(&ctor);
      return c && c->make;
    }
  }
  return false;
}

const char* type_label(ParamType t) {
  switch (t) {
    case ParamType::integer: return "integer";
    case ParamType::real: return "real";
    case ParamType::boolean: return "boolean";
    case ParamType::string: return "string";
    case ParamType::int_list: return "integer list";
    case ParamType::real_list: return "real list";
    case ParamType::string_list: return "string list";
  }
  return "value";
}

// Returns the normalized value, or nullopt on a type mismatch.
std::optional<nlohmann::json> coerce(ParamType t, const nlohmann::json& v) {
  auto is_int = [](const nlohmann::json& x) {
    return x.is_number_integer() || x.is_number_unsigned();
  };
  switch (t) {
    case ParamType::integer:
      if (is_int(v)) return nlohmann::json(v.get<long long>());
      return std::nullopt;
    case ParamType::real:
      if (v.is_number()) return nlohmann::json(v.get<double>());
      return std::nullopt;
    case ParamType::boolean:
      if (v.is_boolean()) return std::optional<nlohmann::json>(std::in_place, v);
      return std::nullopt;
    case ParamType::string:
      if (v.is_string()) return std::optional<nlohmann::json>(std::in_place, v);
      return std::nullopt;
    case ParamType::int_list:
    case ParamType::real_list:
    case ParamType::string_list: {
      if (!v.is_array()) return std::nullopt;
      nlohmann::json out = nlohmann::json::array();
      const ParamType elem = t == ParamType::int_list    ? ParamType::integer
                             : t == ParamType::real_list ? ParamType::real
                                                         : ParamType::string;
      for (const auto& e : v) {
        auto c = coerce(elem, e);
        if (!c) return std::nullopt;
        out.push_back(*c);
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::frontend: return "frontend";
    case ComponentKind::backend: return "backend";
    case ComponentKind::loss: return "loss";
    case ComponentKind::augmentation: return "augmentation";
    case ComponentKind::dataset: return "dataset";
  }
  return "unknown";
}

ComponentKind parse_kind(std::string_view text) {
  for (auto k : {ComponentKind::frontend, ComponentKind::backend, ComponentKind::loss,
                 ComponentKind::augmentation, ComponentKind::dataset}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown component kind \"" + std::string(text) +
                    "\" (expected frontend, backend, loss, augmentation, dataset)");
}

Params validate_params(const ParamSchema& schema, const Params& given, const std::string& where) {
  if (!given.is_null() && !given.is_object()) {
    throw RegistryError(RegistryError::Code::param_validation,
                        "ParamValidation(" + where + "): params must be a mapping", "");
  }
  Params out = Params::object();
  if (given.is_object()) {
    for (const auto& [key, value] : given.items()) {
      auto it = std::find_if(schema.begin(), schema.end(),
                             [&](const ParamSpec& s) { return s.key == key; });
      if (it == schema.end()) {
        std::vector<std::string> known;
        for (const auto& s : schema) known.push_back(s.key);
        throw RegistryError(RegistryError::Code::param_validation,
                            "ParamValidation(\"" + key + "\", unknown key) in " + where +
                                "; accepted keys: " + join(known),
                            key);
      }
      auto coerced = coerce(it->type, value);
      if (!coerced) {
        throw RegistryError(RegistryError::Code::param_validation,
                            "ParamValidation(\"" + key + "\", expected " +
                                type_label(it->type) + ") in " + where,
                            key);
      }
      out[key] = *coerced;
    }
  }
  for (const auto& spec : schema) {
    if (out.contains(spec.key)) continue;
    if (spec.required()) {
      throw RegistryError(RegistryError::Code::param_validation,
                          "ParamValidation(\"" + spec.key + "\", missing required key) in " +
                              where,
                          spec.key);
    }
    out[spec.key] = *coerce(spec.type, spec.default_value);
  }
  return out;
}

Registry& Registry::global() {
  static Registry* instance = [] {
    auto* r = new Registry();
    register_builtins(*r);
    return r;
  }();
  return *instance;
}

RegistrationHandle Registry::add(ComponentKind kind, const std::string& name, Constructor ctor,
                                 ParamSchema schema) {
  if (frozen_) {
    throw RegistryError(RegistryError::Code::frozen,
                        "registry is frozen; cannot register " + to_string(kind) + " \"" +
                            name + "\" after discovery");
  }
  if (name.empty()) {
    throw RegistryError(RegistryError::Code::interface_mismatch,
                        "cannot register a " + to_string(kind) + " with an empty name");
  }
  if (!ctor_matches(kind, ctor)) {
    throw RegistryError(RegistryError::Code::interface_mismatch,
                        "InterfaceMismatch(" + to_string(kind) + ", \"" + name +
                            "\", missing " + required_member(kind) + ")",
                        required_member(kind));
  }
  auto& map = entries_[index(kind)];
  if (map.contains(name)) {
    throw RegistryError(RegistryError::Code::duplicate_name,
                        "DuplicateName(" + to_string(kind) + ", \"" + name + "\")", name);
  }
  for (const auto& spec : schema) {
    if (!spec.required() && !coerce(spec.type, spec.default_value)) {
      throw RegistryError(RegistryError::Code::interface_mismatch,
                          "default of \"" + spec.key + "\" for " + to_string(kind) + " \"" +
                              name + "\" does not match its declared type",
                          spec.key);
    }
  }
  map.emplace(name, Entry{std::move(ctor), std::move(schema)});
  reserved_[index(kind)].erase(name);
  return {kind, name};
}

void Registry::reserve(ComponentKind kind, const std::string& name) {
  if (!entries_[index(kind)].contains(name)) reserved_[index(kind)][name] = true;
}

bool Registry::contains(ComponentKind kind, const std::string& name) const {
  return entries_[index(kind)].contains(name);
}

std::vector<std::string> Registry::list(ComponentKind kind) const {
  std::vector<std::string> names;
  for (const auto& [name, entry] : entries_[index(kind)]) names.push_back(name);
  return names;  // std::map iteration is already sorted
}

std::vector<std::string> Registry::reserved(ComponentKind kind) const {
  std::vector<std::string> names;
  for (const auto& [name, flag] : reserved_[index(kind)]) names.push_back(name);
  return names;
}

const Registry::Entry& Registry::lookup(ComponentKind kind, const std::string& name) const {
  const auto& map = entries_[index(kind)];
  auto it = map.find(name);
  if (it == map.end()) {
    std::string msg = "UnresolvableComponent(" + to_string(kind) + ", \"" + name + "\")";
    if (reserved_[index(kind)].contains(name)) {
      msg += ": reserved plugin name with no implementation loaded";
    }
    msg += "; registered " + to_string(kind) + " names: " + join(list(kind));
    throw RegistryError(RegistryError::Code::unknown_name, msg, name);
  }
  return it->second;
}

const ParamSchema& Registry::schema(ComponentKind kind, const std::string& name) const {
  return lookup(kind, name).schema;
}

Params Registry::validate(ComponentKind kind, const std::string& name,
                          const Params& params) const {
  return validate_params(lookup(kind, name).schema, params, to_string(kind) + " \"" + name + "\"");
}

namespace {
template <typename Ptr>
Ptr named(Ptr p, const std::string& name) {
  p->set_type_name(name);
  return p;
}
}  // namespace

template <typename T>
std::unique_ptr<FrontEnd<T>> Registry::make_frontend(const std::string& name,
                                                     const Params& params) const {
  const auto& e = lookup(ComponentKind::frontend, name);
  const auto& c = std::get<FrontEndCtor>(e.ctor);
  auto p = validate(ComponentKind::frontend, name, params);
  if constexpr (std::is_same_v<T, float>) return named(c.f32(p), name);
  else return named(c.f64(p), name);
}

template <typename T>
std::unique_ptr<BackEnd<T>> Registry::make_backend(const std::string& name,
                                                   const Params& params) const {
  const auto& e = lookup(ComponentKind::backend, name);
  const auto& c = std::get<BackEndCtor>(e.ctor);
  auto p = validate(ComponentKind::backend, name, params);
  if constexpr (std::is_same_v<T, float>) return named(c.f32(p), name);
  else return named(c.f64(p), name);
}

template <typename T>
std::unique_ptr<Loss<T>> Registry::make_loss(const std::string& name, const Params& params) const {
  const auto& e = lookup(ComponentKind::loss, name);
  const auto& c = std::get<LossCtor>(e.ctor);
  auto p = validate(ComponentKind::loss, name, params);
  if constexpr (std::is_same_v<T, float>) return named(c.f32(p), name);
  else return named(c.f64(p), name);
}

std::unique_ptr<Augmentation> Registry::make_augmentation(const std::string& name,
                                                          const Params& params) const {
  const auto& e = lookup(ComponentKind::augmentation, name);
  auto p = validate(ComponentKind::augmentation, name, params);
  return named(std::get<AugmentationCtor>(e.ctor).make(p), name);
}

std::unique_ptr<Dataset> Registry::make_dataset(const std::string& name,
                                                const Params& params) const {
  const auto& e = lookup(ComponentKind::dataset, name);
  auto p = validate(ComponentKind::dataset, name, params);
  return named(std::get<DatasetCtor>(e.ctor).make(p), name);
}

template std::unique_ptr<FrontEnd<float>> Registry::make_frontend<float>(const std::string&,
                                                                         const Params&) const;
template std::unique_ptr<FrontEnd<double>> Registry::make_frontend<double>(const std::string&,
                                                                           const Params&) const;
template std::unique_ptr<BackEnd<float>> Registry::make_backend<float>(const std::string&,
                                                                       const Params&) const;
template std::unique_ptr<BackEnd<double>> Registry::make_backend<double>(const std::string&,
                                                                         const Params&) const;
template std::unique_ptr<Loss<float>> Registry::make_loss<float>(const std::string&,
                                                                 const Params&) const;
template std::unique_ptr<Loss<double>> Registry::make_loss<double>(const std::string&,
                                                                   const Params&) const;

void load_plugin(Registry& registry, const std::filesystem::path& path) {
  // Handles stay open for the process lifetime: plugin vtables must outlive
  // every component they construct.
  std::error_code ec;
  const auto canonical = std::filesystem::weakly_canonical(path, ec).string();
  if (registry.has_plugin(canonical)) return;
  void* handle = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!handle) {
    const char* err = dlerror();
    throw ConfigError("cannot load plugin " + path.string() + ": " + (err ? err : "unknown"));
  }
  auto fn = reinterpret_cast<adf_register_plugin_fn>(dlsym(handle, "adf_register_plugin"));
  if (!fn) {
    throw ConfigError("plugin " + path.string() + " does not export adf_register_plugin");
  }
  fn(registry);
  registry.note_plugin(canonical);
}

void discover(Registry& registry, const std::vector<std::string>& plugin_paths) {
  for (const auto& p : plugin_paths) load_plugin(registry, p);
  registry.freeze();
}

}  // namespace adf
