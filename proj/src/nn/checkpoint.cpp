/*
 * Copyright 2026 The stugraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "stugraph/nn/checkpoint.hpp"

#include <algorithm>
#include <map>

namespace stugraph::nn {

nlohmann::json save_checkpoint(const NamedTensors& tensors) {
  nlohmann::json manifest = nlohmann::json::array();
  nlohmann::json values = nlohmann::json::object();
  for (const auto& t : tensors) {
    manifest.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
    values[t.name] = std::vector<double>(t.data, t.data + t.size());
  }
  return {{"format", "stugraph-checkpoint"}, {"version", 1}, {"manifest", manifest}, {"values", values}};
}

void load_checkpoint(const nlohmann::json& checkpoint, const NamedTensors& tensors) {
  if (checkpoint.value("format", "") != "stugraph-checkpoint") {
    throw Error("checkpoint: missing or unknown format tag");
  }
  std::map<std::string, std::pair<Index, Index>> shapes;
  for (const auto& entry : checkpoint.at("manifest")) {
    shapes[entry.at("name").get<std::string>()] = {entry.at("rows").get<Index>(),
                                                   entry.at("cols").get<Index>()};
  }
  if (shapes.size() != tensors.size()) {
    throw Error("checkpoint: holds " + std::to_string(shapes.size()) + " tensors, model expects " +
                std::to_string(tensors.size()));
  }
  for (const auto& t : tensors) {
    const auto it = shapes.find(t.name);
    if (it == shapes.end()) throw Error("checkpoint: tensor '" + t.name + "' is missing");
    if (it->second.first != t.rows || it->second.second != t.cols) {
      throw Error("checkpoint: tensor '" + t.name + "' has shape " +
                  shape_string(it->second.first, it->second.second) + ", model expects " +
                  shape_string(t.rows, t.cols));
    }
    const auto flat = checkpoint.at("values").at(t.name).get<std::vector<double>>();
    if (static_cast<Index>(flat.size()) != t.size()) {
      throw Error("checkpoint: tensor '" + t.name + "' has the wrong number of values");
    }
    std::copy(flat.begin(), flat.end(), t.data);
  }
}

}  // namespace stugraph::nn
