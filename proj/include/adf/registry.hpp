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
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "adf/components.hpp"
#include "adf/error.hpp"

namespace adf {

using Params = nlohmann::json;

enum class ComponentKind { frontend, backend, loss, augmentation, dataset };

std::string to_string(ComponentKind kind);
ComponentKind parse_kind(std::string_view text);

enum class ParamType { integer, real, boolean, string, int_list, real_list, string_list };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::real;
  nlohmann::json default_value;  // null => required
  std::string doc;

  bool required() const { return default_value.is_null(); }
};

using ParamSchema = std::vector<ParamSpec>;

class RegistryError : public ConfigError {
 public:
  enum class Code { duplicate_name, interface_mismatch, unknown_name, param_validation, frozen };

  RegistryError(Code code, const std::string& what, std::string key = {})
      : ConfigError(what), code_(code), key_(std::move(key)) {}

  Code code() const noexcept { return code_; }
  /// Offending parameter key (param_validation) or member (interface_mismatch).
  const std::string& key() const noexcept { return key_; }

 private:
  Code code_;
  std::string key_;
};

template <typename T>
using FrontEndFn = std::function<std::unique_ptr<FrontEnd<T>>(const Params&)>;
template <typename T>
using BackEndFn = std::function<std::unique_ptr<BackEnd<T>>(const Params&)>;
template <typename T>
using LossFn = std::function<std::unique_ptr<Loss<T>>(const Params&)>;

struct FrontEndCtor {
  FrontEndFn<float> f32;
  FrontEndFn<double> f64;
};
struct BackEndCtor {
  BackEndFn<float> f32;
  BackEndFn<double> f64;
};
struct LossCtor {
  LossFn<float> f32;
  LossFn<double> f64;
};
struct AugmentationCtor {
  std::function<std::unique_ptr<Augmentation>(const Params&)> make;
};
struct DatasetCtor {
  std::function<std::unique_ptr<Dataset>(const Params&)> make;
};

using Constructor =
    std::variant<FrontEndCtor, BackEndCtor, LossCtor, AugmentationCtor, DatasetCtor>;

struct RegistrationHandle {
  ComponentKind kind;
  std::string name;
};

/// Builds a float/double constructor pair for a component class template
/// taking `const Params&`.
template <template <typename> class C>
FrontEndCtor frontend_ctor() {
  return {[](const Params& p) { return std::unique_ptr<FrontEnd<float>>(new C<float>(p)); },
          [](const Params& p) { return std::unique_ptr<FrontEnd<double>>(new C<double>(p)); }};
}
template <template <typename> class C>
BackEndCtor backend_ctor() {
  return {[](const Params& p) { return std::unique_ptr<BackEnd<float>>(new C<float>(p)); },
          [](const Params& p) { return std::unique_ptr<BackEnd<double>>(new C<double>(p)); }};
}
template <template <typename> class C>
LossCtor loss_ctor() {
  return {[](const Params& p) { return std::unique_ptr<Loss<float>>(new C<float>(p)); },
          [](const Params& p) { return std::unique_ptr<Loss<double>>(new C<double>(p)); }};
}

/// Checks `given` against `schema`: unknown keys and missing required keys
/// are rejected, types are checked, defaults are filled in.
Params validate_params(const ParamSchema& schema, const Params& given, const std::string& where);

/// Name → constructor maps for every component kind.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  /// Process-wide registry with the built-in components already registered.
  static Registry& global();

  RegistrationHandle add(ComponentKind kind, const std::string& name, Constructor ctor,
                         ParamSchema schema = {});

  /// Marks a name as a known plugin point; resolving it reports that no
  /// implementation is loaded.
  void reserve(ComponentKind kind, const std::string& name);

  bool contains(ComponentKind kind, const std::string& name) const;
  /// Sorted lexicographically.
  std::vector<std::string> list(ComponentKind kind) const;
  std::vector<std::string> reserved(ComponentKind kind) const;
  const ParamSchema& schema(ComponentKind kind, const std::string& name) const;

  /// Validated params with defaults materialized.
  Params validate(ComponentKind kind, const std::string& name, const Params& params) const;

  template <typename T>
  std::unique_ptr<FrontEnd<T>> make_frontend(const std::string& name, const Params& params) const;
  template <typename T>
  std::unique_ptr<BackEnd<T>> make_backend(const std::string& name, const Params& params) const;
  template <typename T>
  std::unique_ptr<Loss<T>> make_loss(const std::string& name, const Params& params) const;
  std::unique_ptr<Augmentation> make_augmentation(const std::string& name,
                                                  const Params& params) const;
  std::unique_ptr<Dataset> make_dataset(const std::string& name, const Params& params) const;

  /// Ends the discovery phase; later add() calls fail.
  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  /// Plugin files already loaded into this registry (canonical paths).
  bool has_plugin(const std::string& path) const { return plugins_.contains(path); }
  void note_plugin(const std::string& path) { plugins_.insert(path); }

 private:
  struct Entry {
    Constructor ctor;
    ParamSchema schema;
  };

  const Entry& lookup(ComponentKind kind, const std::string& name) const;

  std::map<std::string, Entry> entries_[5];
  std::map<std::string, bool> reserved_[5];
  std::set<std::string> plugins_;
  bool frozen_ = false;
};

void register_builtins(Registry& registry);

/// Plugins are shared objects exporting
/// `extern "C" void adf_register_plugin(adf::Registry&)`.
/// Loading the same file twice into one registry is a no-op.
void load_plugin(Registry& registry, const std::filesystem::path& path);

/// Loads each plugin path into the registry, then freezes it.
void discover(Registry& registry, const std::vector<std::string>& plugin_paths);

}  // namespace adf

extern "C" {
using adf_register_plugin_fn = void (*)(adf::Registry&);
}
