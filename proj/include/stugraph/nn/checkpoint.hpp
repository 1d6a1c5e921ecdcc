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

#ifndef STUGRAPH_NN_CHECKPOINT_HPP_
#define STUGRAPH_NN_CHECKPOINT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/common.hpp"

namespace stugraph::nn {

/// Named view of a contiguous row-major tensor.
struct TensorRef {
  std::string name;
  double* data = nullptr;
  Index rows = 0;
  Index cols = 0;

  TensorRef(std::string n, MatrixXd& m) : name(std::move(n)), data(m.data()), rows(m.rows()), cols(m.cols()) {}
  TensorRef(std::string n, RowVectorXd& v) : name(std::move(n)), data(v.data()), rows(1), cols(v.cols()) {}
  Index size() const { return rows * cols; }
};

using NamedTensors = std::vector<TensorRef>;

/// JSON checkpoint: a shape manifest plus row-major values per tensor.
nlohmann::json save_checkpoint(const NamedTensors& tensors);

/// Restores every listed tensor; names and shapes must match exactly.
void load_checkpoint(const nlohmann::json& checkpoint, const NamedTensors& tensors);

}  // namespace stugraph::nn

#endif  // STUGRAPH_NN_CHECKPOINT_HPP_
