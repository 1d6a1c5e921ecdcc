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

#include "stugraph/nn/propagation.hpp"

namespace stugraph::nn {

SparseOperator::SparseOperator(SparseMatrixXd matrix, bool symmetric)
    : matrix_(std::move(matrix)), symmetric_(symmetric) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error("propagation operator must be square, got " +
                shape_string(matrix_.rows(), matrix_.cols()));
  }
  matrix_.makeCompressed();
  if (!symmetric_) transpose_ = matrix_.transpose();
}

MatrixXd SparseOperator::apply(const MatrixXd& x) const {
  if (x.rows() != matrix_.cols()) {
    throw Error("propagate: operator " + shape_string(matrix_.rows(), matrix_.cols()) +
                " cannot act on " + shape_string(x.rows(), x.cols()));
  }
  return matrix_ * x;
}

MatrixXd SparseOperator::apply_transpose(const MatrixXd& g) const {
  return symmetric_ ? MatrixXd(matrix_ * g) : MatrixXd(transpose_ * g);
}

CliqueMeanOperator::CliqueMeanOperator(std::vector<Index> group, Kind kind)
    : group_(std::move(group)), kind_(kind) {
  for (Index g : group_) {
    if (g < -1) throw Error("clique operator: invalid group id " + std::to_string(g));
    if (g >= static_cast<Index>(group_size_.size())) {
      group_size_.resize(static_cast<std::size_t>(g + 1), 0);
    }
    if (g >= 0) ++group_size_[static_cast<std::size_t>(g)];
  }
}

MatrixXd CliqueMeanOperator::apply(const MatrixXd& x) const {
  const Index n = size();
  if (x.rows() != n) {
    throw Error("propagate: operator " + shape_string(n, n) + " cannot act on " +
                shape_string(x.rows(), x.cols()));
  }
  MatrixXd sums = MatrixXd::Zero(static_cast<Index>(group_size_.size()), x.cols());
  for (Index v = 0; v < n; ++v) {
    const Index g = group_[static_cast<std::size_t>(v)];
    if (g >= 0) sums.row(g) += x.row(v);
  }
  MatrixXd out(n, x.cols());
  for (Index v = 0; v < n; ++v) {
    const Index g = group_[static_cast<std::size_t>(v)];
    const Index s = g >= 0 ? group_size_[static_cast<std::size_t>(g)] : 1;
    if (kind_ == Kind::kIncludeSelf) {
      out.row(v) = g >= 0 ? RowVectorXd(sums.row(g) / static_cast<double>(s)) : RowVectorXd(x.row(v));
    } else if (g < 0 || s == 1) {
      out.row(v).setZero();
    } else {
      out.row(v) = (sums.row(g) - x.row(v)) / static_cast<double>(s - 1);
    }
  }
  return out;
}

std::string CliqueMeanOperator::name() const {
  return kind_ == Kind::kIncludeSelf ? "clique-mean-inclusive" : "clique-mean-exclusive";
}

}  // namespace stugraph::nn
