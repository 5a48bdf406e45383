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

#include "adf/checkpoint.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "adf/error.hpp"

namespace adf {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

template <typename T>
const char* dtype_name() {
  return std::is_same_v<T, float> ? "float32" : "float64";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json TrainState::to_json() const {
  return {{"step", step},
          {"epoch", epoch},
          {"batch", batch},
          {"best_val_loss", finite_or_null(best_val_loss)},
          {"since_improvement", since_improvement},
          {"validations", validations},
          {"best_validation", best_validation},
          {"best_step", best_step},
          {"history_rows", history_rows},
          {"finished", finished},
          {"stop_reason", stop_reason}};
}

TrainState TrainState::from_json(const json& j) {
  TrainState s;
  s.step = j.at("step").get<long>();
  s.epoch = j.at("epoch").get<int>();
  s.batch = j.at("batch").get<std::size_t>();
  const auto& b = j.at("best_val_loss");
  s.best_val_loss = b.is_null() ? std::numeric_limits<double>::infinity() : b.get<double>();
  s.since_improvement = j.at("since_improvement").get<int>();
  s.validations = j.at("validations").get<int>();
  s.best_validation = j.at("best_validation").get<int>();
  s.best_step = j.at("best_step").get<long>();
  s.history_rows = j.at("history_rows").get<std::size_t>();
  s.finished = j.at("finished").get<bool>();
  s.stop_reason = j.at("stop_reason").get<std::string>();
  return s;
}

CheckpointMeta Checkpoint::meta() const {
  CheckpointMeta m;
  m.config_yaml = header.at("config").get<std::string>();
  m.config_hash = header.at("config_hash").get<std::string>();
  m.system_id = header.at("system_id").get<std::string>();
  m.seed = header.at("seed").get<std::uint64_t>();
  return m;
}

template <typename T>
void save_checkpoint(const fs::path& path, ModelAssembly<T>& model, const Adam<T>* adam,
                     const TrainState& state, const CheckpointMeta& meta) {
  json index = json::array();
  std::vector<const std::vector<T>*> blocks;
  std::size_t offset = 0;
  auto add = [&](const std::string& name, const std::string& role,
                 const std::vector<std::size_t>& shape, const std::vector<T>& values) {
    index.push_back({{"path", name}, {"role", role}, {"shape", shape}, {"offset", offset},
                     {"count", values.size()}});
    blocks.push_back(&values);
    offset += values.size() * sizeof(T);
  };
  for (const auto& p : model.parameters()) add(p.path, "value", p.param->shape, p.param->value);
  if (adam) {
    for (const auto& [name, mom] : adam->moments()) {
      add(name, "adam_m", {mom.m.size()}, mom.m);
      add(name, "adam_v", {mom.v.size()}, mom.v);
    }
  }
  json header = {{"format", 1},
                 {"dtype", dtype_name<T>()},
                 {"config", meta.config_yaml},
                 {"config_hash", meta.config_hash},
                 {"system_id", meta.system_id},
                 {"seed", meta.seed},
                 {"state", state.to_json()},
                 {"adam_steps", adam ? adam->steps() : 0},
                 {"arrays", index}};
  const std::string text = header.dump();

  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + tmp.string());
    const std::uint64_t len = text.size();
    out.write(kCheckpointMagic, 8);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto* b : blocks) {
      out.write(reinterpret_cast<const char*>(b->data()),
                static_cast<std::streamsize>(b->size() * sizeof(T)));
    }
    out.flush();
    if (!out) throw DataError("short write on checkpoint " + tmp.string());
  }
  fs::rename(tmp, path);
}

Checkpoint read_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0 || len > (1ull << 32)) {
    throw DataError("not a checkpoint file: " + path.string());
  }
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  Checkpoint c;
  c.path = path;
  try {
    c.header = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError("corrupt checkpoint header in " + path.string() + ": " + e.what());
  }
  c.data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  std::size_t need = 0;
  for (const auto& a : c.header.at("arrays")) {
    need = std::max(need, a.at("offset").get<std::size_t>() +
                              a.at("count").get<std::size_t>() *
                                  (c.dtype() == "float32" ? 4 : 8));
  }
  if (c.data.size() < need) throw DataError("truncated checkpoint " + path.string());
  return c;
}

template <typename T>
void restore_checkpoint(const Checkpoint& ckpt, ModelAssembly<T>& model, Adam<T>* adam) {
  if (ckpt.dtype() != dtype_name<T>()) {
    throw ConfigError("checkpoint " + ckpt.path.string() + " holds " + ckpt.dtype() +
                      " arrays; the model runs " + dtype_name<T>());
  }
  std::map<std::string, const json*> values;
  std::map<std::string, std::pair<const json*, const json*>> moments;
  for (const auto& a : ckpt.header.at("arrays")) {
    const auto role = a.at("role").get<std::string>();
    const auto name = a.at("path").get<std::string>();
    if (role == "value") values[name] = &a;
    else if (role == "adam_m") moments[name].first = &a;
    else if (role == "adam_v") moments[name].second = &a;
  }
  auto copy = [&](const json& a, std::vector<T>& dst) {
    const auto count = a.at("count").get<std::size_t>();
    if (count != dst.size()) throw ConfigError("checkpoint array size mismatch");
    std::memcpy(dst.data(), ckpt.data.data() + a.at("offset").get<std::size_t>(), count * sizeof(T));
  };
  for (auto& p : model.parameters()) {
    auto it = values.find(p.path);
    if (it == values.end()) {
      throw ConfigError("checkpoint " + ckpt.path.string() + " lacks parameter " + p.path);
    }
    if (it->second->at("shape").template get<std::vector<std::size_t>>() != p.param->shape) {
      throw ConfigError("checkpoint parameter " + p.path + " has a different shape");
    }
    copy(*it->second, p.param->value);
  }
  if (values.size() != model.parameters().size()) {
    throw ConfigError("checkpoint " + ckpt.path.string() + " holds parameters the model lacks");
  }
  if (adam) {
    adam->moments().clear();
    for (const auto& [name, mv] : moments) {
      if (!mv.first || !mv.second) throw ConfigError("checkpoint optimizer state incomplete");
      auto& dst = adam->moments()[name];
      dst.m.resize(mv.first->at("count").template get<std::size_t>());
      dst.v.resize(mv.second->at("count").template get<std::size_t>());
      copy(*mv.first, dst.m);
      copy(*mv.second, dst.v);
    }
    adam->set_steps(ckpt.header.at("adam_steps").get<long>());
  }
}

template void save_checkpoint<float>(const fs::path&, ModelAssembly<float>&, const Adam<float>*,
                                     const TrainState&, const CheckpointMeta&);
template void save_checkpoint<double>(const fs::path&, ModelAssembly<double>&,
                                      const Adam<double>*, const TrainState&,
                                      const CheckpointMeta&);
template void restore_checkpoint<float>(const Checkpoint&, ModelAssembly<float>&, Adam<float>*);
template void restore_checkpoint<double>(const Checkpoint&, ModelAssembly<double>&,
                                         Adam<double>*);

}  // namespace adf
