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

#ifndef STUGRAPH_BASELINE_FOREST_HPP_
#define STUGRAPH_BASELINE_FOREST_HPP_

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "stugraph/common.hpp"

namespace stugraph::baseline {

struct TreeParams {
  /// -1 means unlimited.
  int max_depth = -1;
  Index min_samples_leaf = 1;
  /// Candidate features per node; 0 means ceil(sqrt(D)).
  Index max_features = 0;

  nlohmann::json to_json() const;
};

struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;
  /// Class histogram of the training rows reaching this node.
  std::vector<Index> counts;

  bool is_leaf() const { return feature < 0; }
};

/// CART classifier with Gini splits. x <= threshold goes left.
class DecisionTree {
 public:
  /// Grows a tree on `rows` of x (repeats allowed, as in a bootstrap sample).
  static DecisionTree fit(const MatrixXd& x, const std::vector<int>& y, const std::vector<Index>& rows,
                          int num_classes, const TreeParams& params, Rng& rng);

  int predict(const MatrixXd& x, Index row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;
  Index leaf_count() const;
  nlohmann::json to_json() const;

 private:
  std::vector<TreeNode> nodes_;
};

/// Most frequent vote; ties go to the lowest class id.
int majority_vote(const std::vector<int>& votes, int num_classes);

struct ForestParams {
  int n_trees = 100;
  TreeParams tree;
  bool bootstrap = true;

  nlohmann::json to_json() const;
};

class RandomForest {
 public:
  /// Tree t draws its sample and feature subsets from derive_seed(seed, t).
  static RandomForest fit(const MatrixXd& x, const std::vector<int>& y, const std::vector<Index>& rows,
                          int num_classes, const ForestParams& params, std::uint64_t seed);

  std::vector<int> predict(const MatrixXd& x) const;
  /// votes[i][t]: prediction of tree t for row i.
  std::vector<std::vector<int>> tree_votes(const MatrixXd& x) const;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  int num_classes() const { return num_classes_; }
  nlohmann::json to_json() const;

 private:
  std::vector<DecisionTree> trees_;
  std::vector<std::uint64_t> tree_seeds_;
  ForestParams params_;
  int num_classes_ = 0;
};

}  // namespace stugraph::baseline

#endif  // STUGRAPH_BASELINE_FOREST_HPP_
