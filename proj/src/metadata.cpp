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

#include "adf/metadata.hpp"

#include <charconv>
#include <unordered_set>

#include "adf/error.hpp"

namespace adf {

namespace {

double parse_real(const std::string& text, const std::string& column, const std::string& where) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    throw DataError(where + ": column " + column + " holds non-numeric value \"" + text + "\"");
  }
  return v;
}

}  // namespace

MetadataTable construct_from(const StringTable& table, const ConstructOptions& opts,
                             const std::string& source) {
  const int c_id = table.column("utt_id");
  const int c_path = table.column("audio_path");
  const int c_label = table.column("label");
  const int c_gender = table.column("gender");
  const int c_lang = table.column("language");
  const int c_pesq = table.column("pesq");
  const int c_nisqa = table.column("nisqa_mos");
  if (c_path < 0) throw DataError("MissingColumn(\"audio_path\") in " + source);
  if (c_label < 0 && opts.require_label) throw DataError("MissingColumn(\"label\") in " + source);
  if (table.rows.empty()) throw DataError("EmptyTable: " + source + " has no rows");

  MetadataTable out;
  out.has_labels = c_label >= 0;
  out.records.reserve(table.rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = source + " row " + std::to_string(r + 1);
    UtteranceRecord rec;
    if (!row[c_path]) throw DataError(where + ": empty audio_path");
    rec.audio_path = *row[c_path];
    if (c_id >= 0 && row[c_id]) {
      rec.utt_id = *row[c_id];
    } else {
      rec.utt_id = std::filesystem::path(rec.audio_path).stem().string();
    }
    if (!seen.insert(rec.utt_id).second) {
      throw DataError("DuplicateUttId(\"" + rec.utt_id + "\") in " + source);
    }
    if (c_label >= 0 && row[c_label]) {
      rec.label = parse_label(*row[c_label]);
      if (!rec.label) {
        throw DataError(where + ": label must be \"bonafide\" or \"spoof\", got \"" +
                        *row[c_label] + "\"");
      }
    } else if (opts.require_label) {
      throw DataError(where + ": missing label for utt_id " + rec.utt_id);
    }
    if (c_gender >= 0 && row[c_gender]) rec.gender = parse_gender(*row[c_gender]);
    if (c_lang >= 0 && row[c_lang]) rec.language = *row[c_lang];
    if (c_pesq >= 0 && row[c_pesq]) rec.pesq = parse_real(*row[c_pesq], "pesq", where);
    if (c_nisqa >= 0 && row[c_nisqa]) rec.nisqa_mos = parse_real(*row[c_nisqa], "nisqa_mos", where);
    rec.dataset_name = opts.dataset_name;
    out.records.push_back(std::move(rec));
  }
  return out;
}

MetadataTable construct(const std::filesystem::path& table_path, const ConstructOptions& opts) {
  ConstructOptions o = opts;
  if (o.dataset_name.empty()) o.dataset_name = table_path.stem().string();
  return construct_from(read_table(table_path), o, table_path.string());
}

void write_metadata(const std::filesystem::path& path,
                    const std::vector<UtteranceRecord>& records) {
  bool any_label = false, any_gender = false, any_lang = false, any_pesq = false,
       any_nisqa = false;
  for (const auto& r : records) {
    any_label |= r.label.has_value();
    any_gender |= r.gender.has_value();
    any_lang |= r.language.has_value();
    any_pesq |= r.pesq.has_value();
    any_nisqa |= r.nisqa_mos.has_value();
  }
  StringTable t;
  t.columns = {"utt_id", "audio_path"};
  if (any_label) t.columns.push_back("label");
  if (any_gender) t.columns.push_back("gender");
  if (any_lang) t.columns.push_back("language");
  if (any_pesq) t.columns.push_back("pesq");
  if (any_nisqa) t.columns.push_back("nisqa_mos");
  for (const auto& r : records) {
    std::vector<std::optional<std::string>> row{r.utt_id, r.audio_path};
    if (any_label) row.push_back(r.label ? std::optional(to_string(*r.label)) : std::nullopt);
    if (any_gender) {
      row.push_back(r.gender && *r.gender != Gender::unknown ? std::optional(to_string(*r.gender))
                                                             : std::nullopt);
    }
    if (any_lang) row.push_back(r.language);
    if (any_pesq) row.push_back(r.pesq ? std::optional(format_double(*r.pesq)) : std::nullopt);
    if (any_nisqa) {
      row.push_back(r.nisqa_mos ? std::optional(format_double(*r.nisqa_mos)) : std::nullopt);
    }
    t.rows.push_back(std::move(row));
  }
  if (is_parquet_path(path)) write_parquet(path, t, {"pesq", "nisqa_mos"});
  else write_csv(path, t);
}

}  // namespace adf
