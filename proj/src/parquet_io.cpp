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

#include "adf/table_io.hpp"

#include <algorithm>

#include "adf/error.hpp"

#ifdef ADF_WITH_PARQUET
#include <arrow/api.h>
#include <arrow/io/file.h>
#include <parquet/arrow/reader.h>
#include <parquet/arrow/writer.h>
#endif

namespace adf {

#ifdef ADF_WITH_PARQUET

namespace {

template <typename R>
R unwrap(arrow::Result<R> r, const std::string& what) {
  if (!r.ok()) throw DataError(what + ": " + r.status().ToString());
  return std::move(r).ValueOrDie();
}

void check(const arrow::Status& st, const std::string& what) {
  if (!st.ok()) throw DataError(what + ": " + st.ToString());
}

std::optional<std::string> cell_text(const arrow::Array& arr, int64_t i) {
  if (arr.IsNull(i)) return std::nullopt;
  switch (arr.type_id()) {
    case arrow::Type::STRING:
      return static_cast<const arrow::StringArray&>(arr).GetString(i);
    case arrow::Type::LARGE_STRING:
      return static_cast<const arrow::LargeStringArray&>(arr).GetString(i);
    case arrow::Type::DOUBLE:
      return format_double(static_cast<const arrow::DoubleArray&>(arr).Value(i));
    case arrow::Type::FLOAT:
      return format_double(static_cast<const arrow::FloatArray&>(arr).Value(i));
    case arrow::Type::INT64:
      return std::to_string(static_cast<const arrow::Int64Array&>(arr).Value(i));
    case arrow::Type::INT32:
      return std::to_string(static_cast<const arrow::Int32Array&>(arr).Value(i));
    case arrow::Type::BOOL:
      return static_cast<const arrow::BooleanArray&>(arr).Value(i) ? "true" : "false";
    default: {
      auto scalar = arr.GetScalar(i);
      if (!scalar.ok()) return std::nullopt;
      return (*scalar)->ToString();
    }
  }
}

}  // namespace

bool parquet_available() noexcept { return true; }

StringTable read_parquet(const std::filesystem::path& path) {
  const std::string where = "reading " + path.string();
  auto in = unwrap(arrow::io::ReadableFile::Open(path.string()), where);
  auto reader = unwrap(parquet::arrow::OpenFile(in, arrow::default_memory_pool()), where);
  std::shared_ptr<arrow::Table> table = unwrap(reader->ReadTable(), where);
  table = unwrap(table->CombineChunks(), where);

  StringTable out;
  const int ncol = table->num_columns();
  const int64_t nrow = table->num_rows();
  for (int c = 0; c < ncol; ++c) out.columns.push_back(table->field(c)->name());
  out.rows.assign(nrow, std::vector<std::optional<std::string>>(ncol));
  for (int c = 0; c < ncol; ++c) {
    auto chunks = table->column(c);
    if (chunks->num_chunks() == 0) continue;
    const auto& arr = *chunks->chunk(0);
    for (int64_t r = 0; r < nrow; ++r) out.rows[r][c] = cell_text(arr, r);
  }
  return out;
}

void write_parquet(const std::filesystem::path& path, const StringTable& table,
                   const std::vector<std::string>& numeric_columns) {
  const std::string where = "writing " + path.string();
  std::vector<std::shared_ptr<arrow::Field>> fields;
  std::vector<std::shared_ptr<arrow::Array>> arrays;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& name = table.columns[c];
    const bool numeric =
        std::find(numeric_columns.begin(), numeric_columns.end(), name) != numeric_columns.end();
    std::shared_ptr<arrow::Array> arr;
    if (numeric) {
      arrow::DoubleBuilder b;
      for (const auto& row : table.rows) {
        if (row[c]) check(b.Append(std::stod(*row[c])), where);
        else check(b.AppendNull(), where);
      }
      check(b.Finish(&arr), where);
      fields.push_back(arrow::field(name, arrow::float64()));
    } else {
      arrow::StringBuilder b;
      for (const auto& row : table.rows) {
        if (row[c]) check(b.Append(*row[c]), where);
        else check(b.AppendNull(), where);
      }
      check(b.Finish(&arr), where);
      fields.push_back(arrow::field(name, arrow::utf8()));
    }
    arrays.push_back(arr);
  }
  auto t = arrow::Table::Make(arrow::schema(fields), arrays);
  auto out = unwrap(arrow::io::FileOutputStream::Open(path.string()), where);
  check(parquet::arrow::WriteTable(*t, arrow::default_memory_pool(), out, 1 << 16), where);
  check(out->Close(), where);
}

#else

bool parquet_available() noexcept { return false; }

StringTable read_parquet(const std::filesystem::path& path) {
  throw DataError("cannot read " + path.string() +
                  ": built without Parquet support; convert the table to CSV");
}

void write_parquet(const std::filesystem::path& path, const StringTable&,
                   const std::vector<std::string>&) {
  throw DataError("cannot write " + path.string() + ": built without Parquet support");
}

#endif

}  // namespace adf
