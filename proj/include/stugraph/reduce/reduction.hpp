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

#ifndef STUGRAPH_REDUCE_REDUCTION_HPP_
#define STUGRAPH_REDUCE_REDUCTION_HPP_

#include <cstdint>
#include <string>

#include <json.hpp>

#include "stugraph/reduce/umap.hpp"

namespace stugraph::reduce {

/// Which reduction to run and at what width.
struct ReductionSpec {
  ReductionMethod method = ReductionMethod::kUmap;
  Index components = 10;
  /// PCA width ahead of UMAP for kPcaThenUmap.
  Index intermediate = 50;
  /// UMAP settings; n_components and seed are overridden.
  UmapParams umap;

  std::string label() const;
  nlohmann::json to_json() const;
  static ReductionSpec from_json(const nlohmann::json& j);
};

Embedding reduce(const MatrixXd& x, const ReductionSpec& spec, std::uint64_t seed);

}  // namespace stugraph::reduce

#endif  // STUGRAPH_REDUCE_REDUCTION_HPP_
