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

#include "stugraph/baseline/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stugraph/parallel.hpp"

namespace stugraph::baseline {
namespace {

double gini(const std::vector<Index>& counts, Index n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (Index c : counts) s += static_cast<double>(c) * static_cast<double>(c);
  return 1.0 - s / (static_cast<double>(n) * static_cast<double>(n));
}

// Sum of c^2 / n, the quantity a Gini split maximizes.
double purity(const std::vector<Index>& counts, Index n) {
  double s = 0.0;
  for (Index c : counts) s += static_cast<double>(c) * static_cast<double>(c);
  return s / static_cast<double>(n);
}

int argmax_class(const std::vector<Index>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;
};

}  // namespace

nlohmann::json TreeParams::to_json() const {
  return {{"max_depth", max_depth < 0 ? nlohmann::json(nullptr) : nlohmann::json(max_depth)},
          {"min_samples_leaf", min_samples_leaf},
          {"max_features", max_features}};
}

DecisionTree DecisionTree::fit(const MatrixXd& x, const std::vector<int>& y, const std::vector<Index>& rows,
                               int num_classes, const TreeParams& params, Rng& rng) {
  if (rows.empty()) throw Error("decision tree: no training rows");
  if (params.min_samples_leaf < 1) throw Error("decision tree: min_samples_leaf must be at least 1");
  const Index d = x.cols();
  const Index max_features =
      params.max_features > 0 ? std::min(params.max_features, d)
                              : static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(d))));
  DecisionTree tree;
  struct Work {
    int node;
    std::vector<Index> rows;
  };
  std::vector<Work> stack;
  auto make_node = [&](const std::vector<Index>& r, int depth) {
    TreeNode node;
    node.depth = depth;
    node.counts.assign(static_cast<std::size_t>(num_classes), 0);
    for (Index i : r) {
      const int label = y[static_cast<std::size_t>(i)];
      if (label < 0 || label >= num_classes) throw Error("decision tree: label out of range");
      ++node.counts[static_cast<std::size_t>(label)];
    }
    tree.nodes_.push_back(std::move(node));
    return static_cast<int>(tree.nodes_.size()) - 1;
  };
  stack.push_back({make_node(rows, 0), rows});

  std::vector<Index> order(static_cast<std::size_t>(d));
  std::vector<std::pair<double, int>> pairs;
  while (!stack.empty()) {
    Work work = std::move(stack.back());
    stack.pop_back();
    const Index n = static_cast<Index>(work.rows.size());
    const std::vector<Index> counts = tree.nodes_[static_cast<std::size_t>(work.node)].counts;
    const int depth = tree.nodes_[static_cast<std::size_t>(work.node)].depth;
    const bool pure = std::count_if(counts.begin(), counts.end(), [](Index c) { return c > 0; }) <= 1;
    if (pure || (params.max_depth >= 0 && depth >= params.max_depth) ||
        n < 2 * params.min_samples_leaf) {
      continue;
    }

    // Candidate features: the first max_features non-constant ones from a
    // fresh shuffle, then evaluated in ascending index order.
    std::iota(order.begin(), order.end(), Index{0});
    shuffle_in_place(order, rng);
    std::vector<Index> candidates;
    for (Index f : order) {
      if (static_cast<Index>(candidates.size()) == max_features) break;
      const double first = x(work.rows.front(), f);
      const bool constant = std::all_of(work.rows.begin(), work.rows.end(),
                                        [&](Index r) { return x(r, f) == first; });
      if (!constant) candidates.push_back(f);
    }
    std::sort(candidates.begin(), candidates.end());

    Split best;
    for (Index f : candidates) {
      pairs.clear();
      for (Index r : work.rows) pairs.emplace_back(x(r, f), y[static_cast<std::size_t>(r)]);
      std::sort(pairs.begin(), pairs.end());
      std::vector<Index> left(static_cast<std::size_t>(num_classes), 0);
      std::vector<Index> right = counts;
      for (Index i = 0; i + 1 < n; ++i) {
        const int label = pairs[static_cast<std::size_t>(i)].second;
        ++left[static_cast<std::size_t>(label)];
        --right[static_cast<std::size_t>(label)];
        const double v = pairs[static_cast<std::size_t>(i)].first;
        const double next = pairs[static_cast<std::size_t>(i + 1)].first;
        if (v == next) continue;
        const Index nl = i + 1;
        const Index nr = n - nl;
        if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
        const double score = purity(left, nl) + purity(right, nr);
        if (score > best.score) {
          double mid = v + (next - v) / 2.0;
          if (!(mid < next)) mid = v;
          best = {static_cast<int>(f), mid, score};
        }
      }
    }
    if (best.feature < 0) continue;

    std::vector<Index> left_rows;
    std::vector<Index> right_rows;
    for (Index r : work.rows) (x(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
    const int l = make_node(left_rows, depth + 1);
    const int r = make_node(right_rows, depth + 1);
    const auto nl = static_cast<double>(left_rows.size());
    const auto nr = static_cast<double>(right_rows.size());
    const double child = (nl * gini(tree.nodes_[static_cast<std::size_t>(l)].counts, static_cast<Index>(nl)) +
                          nr * gini(tree.nodes_[static_cast<std::size_t>(r)].counts, static_cast<Index>(nr))) /
                         static_cast<double>(n);
    if (child > gini(counts, n) + 1e-12) throw Error("decision tree: split increased Gini impurity");
    TreeNode& parent = tree.nodes_[static_cast<std::size_t>(work.node)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = l;
    parent.right = r;
    stack.push_back({r, std::move(right_rows)});
    stack.push_back({l, std::move(left_rows)});
  }
  return tree;
}

int DecisionTree::predict(const MatrixXd& x, Index row) const {
  int v = 0;
  while (!nodes_[static_cast<std::size_t>(v)].is_leaf()) {
    const auto& node = nodes_[static_cast<std::size_t>(v)];
    v = x(row, node.feature) <= node.threshold ? node.left : node.right;
  }
  return argmax_class(nodes_[static_cast<std::size_t>(v)].counts);
}

int DecisionTree::depth() const {
  int out = 0;
  for (const auto& n : nodes_) out = std::max(out, n.depth);
  return out;
}

Index DecisionTree::leaf_count() const {
  return std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); });
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nlohmann::json j = {{"counts", n.counts}, {"depth", n.depth}};
    if (!n.is_leaf()) {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    out.push_back(std::move(j));
  }
  return out;
}

int majority_vote(const std::vector<int>& votes, int num_classes) {
  std::vector<Index> counts(static_cast<std::size_t>(num_classes), 0);
  for (int v : votes) ++counts[static_cast<std::size_t>(v)];
  return argmax_class(counts);
}

nlohmann::json ForestParams::to_json() const {
  return {{"n_trees", n_trees}, {"tree", tree.to_json()}, {"bootstrap", bootstrap}};
}

RandomForest RandomForest::fit(const MatrixXd& x, const std::vector<int>& y, const std::vector<Index>& rows,
                               int num_classes, const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees < 1) throw Error("random forest: n_trees must be at least 1");
  if (static_cast<Index>(y.size()) != x.rows()) throw Error("random forest: labels and features differ in length");
  RandomForest forest;
  forest.params_ = params;
  forest.num_classes_ = num_classes;
  forest.trees_.resize(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) forest.tree_seeds_.push_back(derive_seed(seed, static_cast<std::uint64_t>(t)));
  parallel_for(forest.trees_.size(), [&](std::size_t t) {
    Rng rng(forest.tree_seeds_[t]);
    std::vector<Index> sample;
    if (params.bootstrap) {
      sample.reserve(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        sample.push_back(rows[uniform_index(rng, rows.size())]);
      }
    } else {
      sample = rows;
    }
    forest.trees_[t] = DecisionTree::fit(x, y, sample, num_classes, params.tree, rng);
  });
  return forest;
}

std::vector<std::vector<int>> RandomForest::tree_votes(const MatrixXd& x) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) {
    auto& v = out[static_cast<std::size_t>(i)];
    v.reserve(trees_.size());
    for (const auto& tree : trees_) v.push_back(tree.predict(x, i));
  }
  return out;
}

std::vector<int> RandomForest::predict(const MatrixXd& x) const {
  std::vector<int> out;
  for (const auto& v : tree_votes(x)) out.push_back(majority_vote(v, num_classes_));
  return out;
}

nlohmann::json RandomForest::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    trees.push_back({{"seed", tree_seeds_[t]}, {"nodes", trees_[t].to_json()}});
  }
  return {{"params", params_.to_json()}, {"num_classes", num_classes_}, {"trees", trees}};
}

}  // namespace stugraph::baseline
