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

#include <algorithm>
#include <cctype>

#include "adf/records.hpp"

namespace adf {

std::string to_string(Label label) { return label == Label::bonafide ? "bonafide" : "spoof"; }

std::string to_string(Gender gender) {
  switch (gender) {
    case Gender::female: return "F";
    case Gender::male: return "M";
    case Gender::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "bonafide" || s == "bona-fide" || s == "bona_fide") return Label::bonafide;
  if (s == "spoof") return Label::spoof;
  return std::nullopt;
}

Gender parse_gender(std::string_view text) {
  if (text == "F" || text == "f") return Gender::female;
  if (text == "M" || text == "m") return Gender::male;
  return Gender::unknown;
}

}  // namespace adf
