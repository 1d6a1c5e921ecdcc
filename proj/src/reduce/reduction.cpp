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

#include "stugraph/reduce/reduction.hpp"

namespace stugraph::reduce {

std::string ReductionSpec::label() const {
  const std::string width = "(" + std::to_string(components) + ")";
  switch (method) {
    case ReductionMethod::kPca:
      return "PCA" + width;
    case ReductionMethod::kUmap:
      return "UMAP" + width;
    case ReductionMethod::kPcaThenUmap:
      return "PCA(" + std::to_string(intermediate) + ")->UMAP" + width;
  }
  return "?";
}

nlohmann::json ReductionSpec::to_json() const {
  nlohmann::json j{{"method", to_string(method)}, {"components", components}};
  if (method == ReductionMethod::kPcaThenUmap) j["intermediate"] = intermediate;
  if (method != ReductionMethod::kPca) {
    auto u = umap.to_json();
    u.erase("seed");
    u.erase("n_components");
    j["umap"] = u;
  }
  return j;
}

ReductionSpec ReductionSpec::from_json(const nlohmann::json& j) {
  ReductionSpec spec;
  spec.method = parse_reduction_method(j.at("method").get<std::string>());
  spec.components = j.value("components", spec.components);
  spec.intermediate = j.value("intermediate", spec.intermediate);
  if (j.contains("umap")) spec.umap = UmapParams::from_json(j["umap"]);
  return spec;
}

Embedding reduce(const MatrixXd& x, const ReductionSpec& spec, std::uint64_t seed) {
  UmapParams params = spec.umap;
  params.n_components = static_cast<int>(spec.components);
  params.seed = seed;
  switch (spec.method) {
    case ReductionMethod::kPca:
      return pca_embed(x, spec.components);
    case ReductionMethod::kUmap:
      return umap_embed(x, params);
    case ReductionMethod::kPcaThenUmap:
      return pca_then_umap(x, spec.intermediate, params);
  }
  throw Error("unhandled reduction method");
}

}  // namespace stugraph::reduce
