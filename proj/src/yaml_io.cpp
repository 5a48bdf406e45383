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

#include "adf/yaml_io.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <vector>

#include <yaml-cpp/eventhandler.h>
#include <yaml-cpp/mark.h>
#include <yaml-cpp/yaml.h>

#include "adf/table_io.hpp"

namespace adf {

namespace {

using nlohmann::json;

json type_plain(const std::string& v) {
  static const std::regex int_re(R"([-+]?[0-9]+)");
  static const std::regex hex_re(R"(0x[0-9a-fA-F]+)");
  static const std::regex float_re(R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
  if (v.empty() || v == "~" || v == "null" || v == "Null" || v == "NULL") return nullptr;
  if (v == "true" || v == "True" || v == "TRUE") return true;
  if (v == "false" || v == "False" || v == "FALSE") return false;
  if (std::regex_match(v, int_re)) {
    try {
      return std::stoll(v);
    } catch (const std::out_of_range&) {
      return std::stod(v);
    }
  }
  if (std::regex_match(v, hex_re)) return std::stoll(v, nullptr, 16);
  if (std::regex_match(v, float_re)) return std::stod(v);
  if (v == ".inf" || v == ".Inf" || v == "+.inf") return std::numeric_limits<double>::infinity();
  if (v == "-.inf" || v == "-.Inf") return -std::numeric_limits<double>::infinity();
  if (v == ".nan" || v == ".NaN") return std::numeric_limits<double>::quiet_NaN();
  return v;
}

class Builder : public YAML::EventHandler {
 public:
  json result;
  int documents = 0;
  int document_line = 0;

  void OnDocumentStart(const YAML::Mark& mark) override {
    ++documents;
    document_line = mark.line + 1;
  }
  void OnDocumentEnd() override {}

  void OnNull(const YAML::Mark& mark, YAML::anchor_t anchor) override {
    check_anchor(mark, anchor);
    put(mark, nullptr, false);
  }
  void OnAlias(const YAML::Mark& mark, YAML::anchor_t) override {
    throw ParseError(mark.line + 1, "aliases are not supported");
  }
  void OnAnchor(const YAML::Mark& mark, const std::string&) override {
    throw ParseError(mark.line + 1, "anchors are not supported");
  }
  void OnScalar(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                const std::string& value) override {
    check_anchor(mark, anchor);
    if (tag == "!") {
      put(mark, value, true);
    } else if (tag == "?" || tag.empty()) {
      put(mark, type_plain(value), true);
    } else {
      throw ParseError(mark.line + 1, "tags are not supported");
    }
  }
  void OnSequenceStart(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                       YAML::EmitterStyle::value) override {
    check_anchor(mark, anchor);
    check_tag(mark, tag);
    open(mark, json::array());
  }
  void OnSequenceEnd() override { close(); }
  void OnMapStart(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                  YAML::EmitterStyle::value) override {
    check_anchor(mark, anchor);
    check_tag(mark, tag);
    open(mark, json::object());
  }
  void OnMapEnd() override { close(); }

 private:
  struct Frame {
    json value;
    std::optional<std::string> pending_key;
    int line;
  };
  std::vector<Frame> stack_;

  static void check_anchor(const YAML::Mark& mark, YAML::anchor_t anchor) {
    if (anchor != YAML::NullAnchor) throw ParseError(mark.line + 1, "anchors are not supported");
  }
  static void check_tag(const YAML::Mark& mark, const std::string& tag) {
    if (!tag.empty() && tag != "?" && tag != "!") {
      throw ParseError(mark.line + 1, "tags are not supported");
    }
  }

  void open(const YAML::Mark& mark, json container) {
    if (!stack_.empty() && stack_.back().value.is_object() && !stack_.back().pending_key) {
      throw ParseError(mark.line + 1, "mapping keys must be scalars");
    }
    stack_.push_back({std::move(container), std::nullopt, mark.line + 1});
  }

  void close() {
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    YAML::Mark m;
    m.line = f.line - 1;
    put(m, std::move(f.value), false);
  }

  void put(const YAML::Mark& mark, json v, bool scalar) {
    if (stack_.empty()) {
      result = std::move(v);
      return;
    }
    Frame& top = stack_.back();
    if (top.value.is_array()) {
      top.value.push_back(std::move(v));
      return;
    }
    if (!top.pending_key) {
      if (!scalar || v.is_object() || v.is_array()) {
        throw ParseError(mark.line + 1, "mapping keys must be scalars");
      }
      std::string key = v.is_string() ? v.get<std::string>() : v.dump();
      if (top.value.contains(key)) {
        throw ParseError(mark.line + 1, "duplicate key \"" + key + "\"");
      }
      top.pending_key = std::move(key);
      return;
    }
    top.value[*top.pending_key] = std::move(v);
    top.pending_key.reset();
  }
};

bool needs_real_marker(const std::string& s) {
  return s.find_first_of(".eEni") == std::string::npos;
}

void emit_value(YAML::Emitter& out, const nlohmann::ordered_json& v) {
  switch (v.type()) {
    case nlohmann::ordered_json::value_t::object:
      out << YAML::BeginMap;
      for (const auto& [k, child] : v.items()) {
        out << YAML::Key << k << YAML::Value;
        emit_value(out, child);
      }
      out << YAML::EndMap;
      break;
    case nlohmann::ordered_json::value_t::array: {
      const bool flat = std::all_of(v.begin(), v.end(),
                                    [](const auto& e) { return e.is_primitive(); });
      if (flat) out << YAML::Flow;
      out << YAML::BeginSeq;
      for (const auto& child : v) emit_value(out, child);
      out << YAML::EndSeq;
      break;
    }
    case nlohmann::ordered_json::value_t::string:
      out << YAML::DoubleQuoted << v.get<std::string>();
      break;
    case nlohmann::ordered_json::value_t::boolean:
      out << (v.get<bool>() ? "true" : "false");
      break;
    case nlohmann::ordered_json::value_t::number_integer:
      out << v.get<std::int64_t>();
      break;
    case nlohmann::ordered_json::value_t::number_unsigned:
      out << v.get<std::uint64_t>();
      break;
    case nlohmann::ordered_json::value_t::number_float: {
      const double d = v.get<double>();
      std::string s;
      if (std::isnan(d)) s = ".nan";
      else if (std::isinf(d)) s = d > 0 ? ".inf" : "-.inf";
      else {
        s = format_double(d);
        if (needs_real_marker(s)) s += ".0";
      }
      out << s;
      break;
    }
    default:
      out << YAML::Null;
  }
}

}  // namespace

nlohmann::json parse_yaml(const std::string& text) {
  std::istringstream in(text);
  Builder b;
  try {
    YAML::Parser parser(in);
    while (parser.HandleNextDocument(b)) {
      if (b.documents > 1) throw ParseError(b.document_line, "expected a single document");
    }
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.mark.line + 1, e.msg);
  }
  return b.result;
}

nlohmann::json parse_yaml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_yaml(ss.str());
}

std::string emit_yaml(const nlohmann::ordered_json& doc) {
  YAML::Emitter out;
  out.SetIndent(2);
  emit_value(out, doc);
  if (!out.good()) throw ConfigError("yaml emit failed: " + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

}  // namespace adf
