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

#include "stugraph/cluster/hdbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "stugraph/graph/kdtree.hpp"

namespace stugraph::cluster {
namespace {

class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void link(Index child_root, Index new_root) {
    parent_[static_cast<std::size_t>(child_root)] = new_root;
  }

 private:
  std::vector<Index> parent_;
};

// Points (ids < n) under a hierarchy node, in breadth-first order.
std::vector<Index> leaves_below(const std::vector<LinkageStep>& hierarchy, Index n, Index node) {
  std::vector<Index> out;
  std::vector<Index> frontier{node};
  while (!frontier.empty()) {
    std::vector<Index> next;
    for (Index v : frontier) {
      if (v < n) {
        out.push_back(v);
      } else {
        const auto& step = hierarchy[static_cast<std::size_t>(v - n)];
        next.push_back(step.left);
        next.push_back(step.right);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

VectorXd core_distances(const MatrixXd& x, Index min_samples) {
  const Index n = x.rows();
  if (min_samples < 1 || min_samples > n - 1) {
    throw Error("hdbscan: min_samples = " + std::to_string(min_samples) +
                " must lie in [1, N - 1] with N = " + std::to_string(n));
  }
  const auto knn = graph::all_knn<double>(x, min_samples);
  return knn.distances.col(min_samples - 1);
}

std::vector<MstEdge> mutual_reachability_mst(const MatrixXd& x, const VectorXd& core) {
  const Index n = x.rows();
  std::vector<MstEdge> mst;
  if (n < 2) return mst;
  mst.reserve(static_cast<std::size_t>(n - 1));
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  VectorXd best = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  std::vector<Index> best_from(static_cast<std::size_t>(n), -1);
  Index current = 0;
  in_tree[0] = 1;
  for (Index step = 1; step < n; ++step) {
    Index next = -1;
    double next_w = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < n; ++j) {
      if (in_tree[static_cast<std::size_t>(j)]) continue;
      const double d = (x.row(current) - x.row(j)).norm();
      const double w = std::max({core(current), core(j), d});
      if (w < best(j)) {
        best(j) = w;
        best_from[static_cast<std::size_t>(j)] = current;
      }
      if (best(j) < next_w) {
        next_w = best(j);
        next = j;
      }
    }
    mst.push_back({best_from[static_cast<std::size_t>(next)], next, next_w});
    in_tree[static_cast<std::size_t>(next)] = 1;
    current = next;
  }
  std::stable_sort(mst.begin(), mst.end(),
                   [](const MstEdge& a, const MstEdge& b) { return a.weight < b.weight; });
  return mst;
}

std::vector<LinkageStep> single_linkage(const std::vector<MstEdge>& mst, Index n) {
  UnionFind uf(2 * n);
  std::vector<Index> size(static_cast<std::size_t>(2 * n), 1);
  std::vector<LinkageStep> out;
  out.reserve(mst.size());
  Index next_id = n;
  for (const auto& e : mst) {
    const Index ra = uf.find(e.a);
    const Index rb = uf.find(e.b);
    const Index merged = size[static_cast<std::size_t>(ra)] + size[static_cast<std::size_t>(rb)];
    out.push_back({ra, rb, e.weight, merged});
    uf.link(ra, next_id);
    uf.link(rb, next_id);
    size[static_cast<std::size_t>(next_id)] = merged;
    ++next_id;
  }
  return out;
}

CondensedTree condense_tree(const std::vector<LinkageStep>& hierarchy, Index n,
                            Index min_cluster_size) {
  CondensedTree tree;
  tree.root = n;
  if (n < 2) {
    tree.stability[n] = 0.0;
    for (Index p = 0; p < n; ++p) tree.edges.push_back({n, p, 0.0, 1});
    return tree;
  }
  const Index top = 2 * n - 2;
  std::vector<Index> relabel(static_cast<std::size_t>(top + 1), -1);
  std::vector<char> ignore(static_cast<std::size_t>(top + 1), 0);
  relabel[static_cast<std::size_t>(top)] = n;
  Index next_label = n + 1;
  auto count_of = [&](Index v) {
    return v < n ? Index{1} : hierarchy[static_cast<std::size_t>(v - n)].size;
  };

  // Breadth-first over internal nodes from the root.
  std::vector<Index> order{top};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Index v = order[i];
    if (v >= n) {
      const auto& step = hierarchy[static_cast<std::size_t>(v - n)];
      order.push_back(step.left);
      order.push_back(step.right);
    }
  }

  for (Index node : order) {
    if (node < n || ignore[static_cast<std::size_t>(node)]) continue;
    const auto& step = hierarchy[static_cast<std::size_t>(node - n)];
    const double lambda =
        step.distance > 0.0 ? 1.0 / step.distance : std::numeric_limits<double>::infinity();
    const Index parent = relabel[static_cast<std::size_t>(node)];
    const Index left = step.left;
    const Index right = step.right;
    const Index left_count = count_of(left);
    const Index right_count = count_of(right);

    auto fall_out = [&](Index side) {
      for (Index p : leaves_below(hierarchy, n, side)) tree.edges.push_back({parent, p, lambda, 1});
      std::vector<Index> stack{side};
      while (!stack.empty()) {
        const Index v = stack.back();
        stack.pop_back();
        ignore[static_cast<std::size_t>(v)] = 1;
        if (v >= n) {
          stack.push_back(hierarchy[static_cast<std::size_t>(v - n)].left);
          stack.push_back(hierarchy[static_cast<std::size_t>(v - n)].right);
        }
      }
    };

    if (left_count >= min_cluster_size && right_count >= min_cluster_size) {
      relabel[static_cast<std::size_t>(left)] = next_label++;
      tree.edges.push_back({parent, relabel[static_cast<std::size_t>(left)], lambda, left_count});
      relabel[static_cast<std::size_t>(right)] = next_label++;
      tree.edges.push_back({parent, relabel[static_cast<std::size_t>(right)], lambda, right_count});
    } else if (left_count < min_cluster_size && right_count < min_cluster_size) {
      fall_out(left);
      fall_out(right);
    } else if (left_count < min_cluster_size) {
      relabel[static_cast<std::size_t>(right)] = parent;
      fall_out(left);
    } else {
      relabel[static_cast<std::size_t>(left)] = parent;
      fall_out(right);
    }
  }

  // Stability: sum over children of (lambda_leave - lambda_birth(parent)) * size.
  std::map<Index, double> birth;
  birth[n] = 0.0;
  for (Index c = n; c < next_label; ++c) tree.stability[c] = 0.0;
  for (const auto& e : tree.edges) {
    if (e.child >= n) birth[e.child] = e.lambda;
  }
  for (const auto& e : tree.edges) {
    tree.stability[e.parent] += (e.lambda - birth[e.parent]) * static_cast<double>(e.child_size);
  }
  return tree;
}

std::vector<Index> select_clusters_eom(const CondensedTree& tree) {
  std::map<Index, std::vector<Index>> children;
  for (const auto& e : tree.edges) {
    if (e.child_size > 1) children[e.parent].push_back(e.child);
  }
  std::map<Index, double> stability = tree.stability;
  std::map<Index, bool> is_cluster;
  for (const auto& [id, s] : stability) {
    if (id != tree.root) is_cluster[id] = true;
  }
  for (auto it = is_cluster.rbegin(); it != is_cluster.rend(); ++it) {
    const Index node = it->first;
    double subtree = 0.0;
    for (Index c : children[node]) subtree += stability[c];
    if (subtree > stability[node]) {
      it->second = false;
      stability[node] = subtree;
    } else {
      std::vector<Index> stack = children[node];
      while (!stack.empty()) {
        const Index v = stack.back();
        stack.pop_back();
        is_cluster[v] = false;
        for (Index c : children[v]) stack.push_back(c);
      }
    }
  }
  std::vector<Index> selected;
  for (const auto& [id, keep] : is_cluster) {
    if (keep) selected.push_back(id);
  }
  return selected;
}

ClusterAssignment label_points(const CondensedTree& tree, const std::vector<Index>& selected,
                               Index n) {
  std::map<Index, Index> cluster_parent;
  std::vector<Index> point_parent(static_cast<std::size_t>(n), -1);
  for (const auto& e : tree.edges) {
    if (e.child < n) {
      point_parent[static_cast<std::size_t>(e.child)] = e.parent;
    } else {
      cluster_parent[e.child] = e.parent;
    }
  }
  std::map<Index, int> label_of;
  for (std::size_t i = 0; i < selected.size(); ++i) label_of[selected[i]] = static_cast<int>(i);

  ClusterAssignment out;
  out.num_clusters = static_cast<int>(selected.size());
  out.labels.assign(static_cast<std::size_t>(n), kNoise);
  for (Index p = 0; p < n; ++p) {
    Index c = point_parent[static_cast<std::size_t>(p)];
    while (c >= 0) {
      if (const auto it = label_of.find(c); it != label_of.end()) {
        out.labels[static_cast<std::size_t>(p)] = it->second;
        break;
      }
      const auto up = cluster_parent.find(c);
      c = up == cluster_parent.end() ? -1 : up->second;
    }
  }
  return out;
}

HdbscanResult hdbscan(const MatrixXd& x, const HdbscanParams& params) {
  const Index n = x.rows();
  if (!x.allFinite()) throw Error("hdbscan: input contains non-finite values");
  if (params.min_cluster_size < 2) throw Error("hdbscan: min_cluster_size must be at least 2");
  const VectorXd core = core_distances(x, params.min_samples);
  HdbscanResult out;
  out.mst = mutual_reachability_mst(x, core);
  const auto hierarchy = single_linkage(out.mst, n);
  out.tree = condense_tree(hierarchy, n, params.min_cluster_size);
  const auto selected = select_clusters_eom(out.tree);
  out.assignment = label_points(out.tree, selected, n);
  return out;
}

}  // namespace stugraph::cluster
