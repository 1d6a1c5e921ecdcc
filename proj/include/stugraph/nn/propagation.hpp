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

#ifndef STUGRAPH_NN_PROPAGATION_HPP_
#define STUGRAPH_NN_PROPAGATION_HPP_

#include <string>
#include <vector>

#include "stugraph/common.hpp"

namespace stugraph::nn {

/// Fixed linear map applied to node-feature matrices, with its transpose for
/// the backward pass.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index size() const = 0;
  virtual MatrixXd apply(const MatrixXd& x) const = 0;
  virtual MatrixXd apply_transpose(const MatrixXd& g) const = 0;
  virtual std::string name() const = 0;

  MatrixXd to_dense() const { return apply(MatrixXd::Identity(size(), size())); }
};

class SparseOperator final : public LinearOperator {
 public:
  /// Pass `symmetric = true` to skip storing the transpose.
  explicit SparseOperator(SparseMatrixXd matrix, bool symmetric = false);

  Index size() const override { return matrix_.rows(); }
  MatrixXd apply(const MatrixXd& x) const override;
  MatrixXd apply_transpose(const MatrixXd& g) const override;
  std::string name() const override { return "sparse"; }
  const SparseMatrixXd& matrix() const { return matrix_; }

 private:
  SparseMatrixXd matrix_;
  SparseMatrixXd transpose_;
  bool symmetric_;
};

/// Neighborhood averaging over a graph in which every component is a clique,
/// evaluated in O(N * F) through per-group sums. `group[v]` is the clique id
/// of v, or -1 when v is isolated.
class CliqueMeanOperator final : public LinearOperator {
 public:
  enum class Kind {
    /// Mean over the clique including v; isolated nodes map to themselves.
    /// Equals the symmetric normalized adjacency with self-loops.
    kIncludeSelf,
    /// Mean over the clique without v; isolated nodes map to zero.
    kExcludeSelf,
  };

  CliqueMeanOperator(std::vector<Index> group, Kind kind);

  Index size() const override { return static_cast<Index>(group_.size()); }
  MatrixXd apply(const MatrixXd& x) const override;
  MatrixXd apply_transpose(const MatrixXd& g) const override { return apply(g); }
  std::string name() const override;

 private:
  std::vector<Index> group_;
  std::vector<Index> group_size_;
  Kind kind_;
};

}  // namespace stugraph::nn

#endif  // STUGRAPH_NN_PROPAGATION_HPP_
