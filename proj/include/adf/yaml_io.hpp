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

#include <nlohmann/json.hpp>

#include "adf/error.hpp"

namespace adf {

/// Malformed markup; line is 1-based, 0 when unknown.
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& reason)
      : ConfigError("ParseError(line " + std::to_string(line) + "): " + reason), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parses one YAML document of maps, sequences and scalars into JSON.
/// Plain scalars are typed by the YAML 1.2 core schema; quoted scalars stay
/// strings. Anchors, aliases, tags and duplicate keys are rejected.
nlohmann::json parse_yaml(const std::string& text);
nlohmann::json parse_yaml_file(const std::filesystem::path& path);

/// Block-style YAML preserving key order; reals round-trip exactly.
std::string emit_yaml(const nlohmann::ordered_json& doc);

}  // namespace adf
