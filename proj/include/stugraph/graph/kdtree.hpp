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

#ifndef STUGRAPH_GRAPH_KDTREE_HPP_
#define STUGRAPH_GRAPH_KDTREE_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <vector>

#include "stugraph/common.hpp"
#include "stugraph/parallel.hpp"

namespace stugraph::graph {

template <typename Scalar>
struct Neighbor {
  Index index = -1;
  Scalar distance = 0;  // euclidean

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  }
};

/// Exact k-nearest-neighbor index. Splits on the axis of largest spread at the
/// median; equal distances are ordered by lower point index.
template <typename Scalar>
class KdTree {
 public:
  explicit KdTree(Matrix<Scalar> points, Index leaf_size = 16)
      : points_(std::move(points)), leaf_size_(std::max<Index>(1, leaf_size)) {
    perm_.resize(static_cast<std::size_t>(points_.rows()));
    std::iota(perm_.begin(), perm_.end(), Index{0});
    if (points_.rows() > 0) build(0, points_.rows());
  }

  Index size() const { return points_.rows(); }
  Index dims() const { return points_.cols(); }
  const Matrix<Scalar>& points() const { return points_; }

  /// The k nearest points to `query`, nearest first. `exclude` is skipped
  /// (pass the query's own index for self-excluded searches).
  template <typename Derived>
  std::vector<Neighbor<Scalar>> knn(const Eigen::MatrixBase<Derived>& query, Index k,
                                    Index exclude = -1) const {
    std::priority_queue<std::pair<Scalar, Index>> heap;  // (squared distance, index), worst on top
    if (k > 0 && !nodes_.empty()) search(0, query, k, exclude, heap);
    std::vector<Neighbor<Scalar>> out(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      out[i] = {heap.top().second, std::sqrt(heap.top().first)};
      heap.pop();
    }
    return out;
  }

  /// Point indices grouped by leaf, for structural checks.
  std::vector<std::vector<Index>> leaves() const {
    std::vector<std::vector<Index>> out;
    for (const auto& node : nodes_) {
      if (node.left < 0) out.emplace_back(perm_.begin() + node.begin, perm_.begin() + node.end);
    }
    return out;
  }

 private:
  struct Node {
    Index begin = 0;
    Index end = 0;
    Index axis = 0;
    Scalar split = 0;
    int left = -1;
    int right = -1;
  };

  int build(Index begin, Index end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= leaf_size_) return id;
    Index axis = 0;
    Scalar best_spread = -1;
    for (Index d = 0; d < points_.cols(); ++d) {
      Scalar lo = points_(perm_[begin], d);
      Scalar hi = lo;
      for (Index i = begin; i < end; ++i) {
        lo = std::min(lo, points_(perm_[i], d));
        hi = std::max(hi, points_(perm_[i], d));
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        axis = d;
      }
    }
    if (best_spread <= 0) return id;  // all points identical
    const Index mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](Index a, Index b) {
                       const Scalar va = points_(a, axis);
                       const Scalar vb = points_(b, axis);
                       return va < vb || (va == vb && a < b);
                     });
    const Scalar split = points_(perm_[mid], axis);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  template <typename Derived>
  void search(int id, const Eigen::MatrixBase<Derived>& query, Index k, Index exclude,
              std::priority_queue<std::pair<Scalar, Index>>& heap) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        const Index p = perm_[i];
        if (p == exclude) continue;
        const Scalar d2 = (points_.row(p) - query.derived().template cast<Scalar>()).squaredNorm();
        const std::pair<Scalar, Index> cand{d2, p};
        if (static_cast<Index>(heap.size()) < k) {
          heap.push(cand);
        } else if (cand < heap.top()) {
          heap.pop();
          heap.push(cand);
        }
      }
      return;
    }
    const Scalar diff = static_cast<Scalar>(query(node.axis)) - node.split;
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    search(near, query, k, exclude, heap);
    // <= keeps equal-distance candidates with lower indices reachable.
    if (static_cast<Index>(heap.size()) < k || diff * diff <= heap.top().first) {
      search(far, query, k, exclude, heap);
    }
  }

  Matrix<Scalar> points_;
  Index leaf_size_;
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
};

/// k nearest neighbors of every point, self excluded, nearest first.
template <typename Scalar>
struct KnnTable {
  Matrix<Index> indices;
  Matrix<Scalar> distances;
};

template <typename Scalar>
KnnTable<Scalar> knn_brute_force(const Matrix<Scalar>& points, Index k) {
  const Index n = points.rows();
  KnnTable<Scalar> out{Matrix<Index>(n, k), Matrix<Scalar>(n, k)};
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t qi) {
    const Index q = static_cast<Index>(qi);
    const Vector<Scalar> d2 = (points.rowwise() - points.row(q)).rowwise().squaredNorm();
    std::vector<Index> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      if (i != q) idx.push_back(i);
    }
    auto less = [&](Index a, Index b) { return d2(a) < d2(b) || (d2(a) == d2(b) && a < b); };
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), less);
    for (Index j = 0; j < k; ++j) {
      out.indices(q, j) = idx[j];
      out.distances(q, j) = std::sqrt(d2(idx[j]));
    }
  });
  return out;
}

/// All-points exact k-NN. Uses the KD-tree in low dimension, where it prunes
/// well, and a direct scan otherwise; both give identical neighbor lists.
template <typename Scalar>
KnnTable<Scalar> all_knn(const Matrix<Scalar>& points, Index k, Index leaf_size = 16) {
  const Index n = points.rows();
  if (k < 1 || k >= n) {
    throw Error("k-NN: k = " + std::to_string(k) + " must satisfy 1 <= k < N = " +
                std::to_string(n));
  }
  if (points.cols() > 16) return knn_brute_force(points, k);
  const KdTree<Scalar> tree(points, leaf_size);
  KnnTable<Scalar> out{Matrix<Index>(n, k), Matrix<Scalar>(n, k)};
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t qi) {
    const Index q = static_cast<Index>(qi);
    const auto nbrs = tree.knn(points.row(q), k, q);
    for (Index j = 0; j < k; ++j) {
      out.indices(q, j) = nbrs[j].index;
      out.distances(q, j) = nbrs[j].distance;
    }
  });
  return out;
}

}  // namespace stugraph::graph

#endif  // STUGRAPH_GRAPH_KDTREE_HPP_
