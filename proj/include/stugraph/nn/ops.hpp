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

#ifndef STUGRAPH_NN_OPS_HPP_
#define STUGRAPH_NN_OPS_HPP_

#include <vector>

#include "stugraph/common.hpp"
#include "stugraph/nn/autodiff.hpp"
#include "stugraph/nn/propagation.hpp"

namespace stugraph::nn {

Var matmul(Var a, Var b);
/// op * x. The operator must outlive the tape's backward pass.
Var propagate(const LinearOperator& op, Var x);
Var add(Var a, Var b);
/// Adds a 1 x C row to every row of x.
Var add_bias(Var x, Var bias);
Var hadamard(Var a, Var b);
Var scale(Var x, double factor);
/// Sum of all entries, as a 1x1 node.
Var sum(Var x);
Var relu(Var x);
Var leaky_relu(Var x, double slope = 0.01);
Var concat_cols(Var a, Var b);

struct BatchNorm {
  Parameter gamma;
  Parameter beta;
  RowVectorXd running_mean;
  RowVectorXd running_var;
  double momentum = 0.1;
  double eps = 1e-5;

  BatchNorm() = default;
  BatchNorm(Index features, const std::string& prefix);
  Index features() const { return gamma.value.cols(); }
};

/// Per-column normalization. Train mode uses batch statistics (biased
/// variance) and updates the running estimates (unbiased variance); eval mode
/// reads the running estimates only.
Var batchnorm(Var x, BatchNorm& state, Mode mode);

/// Inverted dropout; identity in eval mode or when p = 0.
Var dropout(Var x, double p, Mode mode, Rng& rng);

/// Mean over rows with mask[i] of -log softmax(logits_i)[labels[i]].
Var cross_entropy(Var logits, const std::vector<int>& labels, const std::vector<bool>& mask);

MatrixXd softmax_rows(const MatrixXd& logits);
std::vector<int> argmax_rows(const MatrixXd& logits);

}  // namespace stugraph::nn

#endif  // STUGRAPH_NN_OPS_HPP_
