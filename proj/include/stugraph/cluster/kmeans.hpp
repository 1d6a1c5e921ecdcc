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

#ifndef STUGRAPH_CLUSTER_KMEANS_HPP_
#define STUGRAPH_CLUSTER_KMEANS_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "stugraph/cluster/assignment.hpp"
#include "stugraph/common.hpp"

namespace stugraph::cluster {

template <typename Scalar>
struct KMeansModel {
  Matrix<Scalar> centroids;
  Scalar inertia = 0;
  int iterations_run = 0;
  /// Inertia after each assignment step, for convergence diagnostics.
  std::vector<Scalar> inertia_history;
};

template <typename Scalar>
struct KMeansResult {
  ClusterAssignment assignment;
  KMeansModel<Scalar> model;
};

namespace detail {

// Nearest centroid; ties go to the lowest index.
template <typename Scalar>
std::pair<int, Scalar> nearest_centroid(const Matrix<Scalar>& x, Index i,
                                        const Matrix<Scalar>& centroids) {
  int best = 0;
  Scalar best_d = std::numeric_limits<Scalar>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const Scalar d = (x.row(i) - centroids.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return {best, best_d};
}

template <typename Scalar>
Matrix<Scalar> kmeans_plus_plus(const Matrix<Scalar>& x, int k, Rng& rng) {
  const Index n = x.rows();
  Matrix<Scalar> centroids(k, x.cols());
  centroids.row(0) = x.row(static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
  Vector<Scalar> d2 = (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const Scalar total = d2.sum();
    Index pick = 0;
    if (total > 0) {
      const Scalar target = static_cast<Scalar>(uniform01(rng)) * total;
      Scalar acc = 0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

}  // namespace detail

/// k-means++ seeding followed by Lloyd iterations. Stops when the assignment
/// is unchanged, the largest centroid shift drops below `tol`, or after
/// `max_iter` iterations. Returned centroids are the means of the returned
/// assignment. A cluster that empties is re-seeded at the point farthest from
/// its current centroid.
template <typename Derived>
KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& data, int k,
                                              std::uint64_t seed, int max_iter = 300,
                                              typename Derived::Scalar tol = 1e-8) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> x = data;
  const Index n = x.rows();
  if (k < 1 || k > n) {
    throw Error("kmeans: k = " + std::to_string(k) + " must satisfy 1 <= k <= N = " +
                std::to_string(n));
  }
  Rng rng(seed);
  KMeansResult<Scalar> out;
  auto& model = out.model;
  model.centroids = detail::kmeans_plus_plus(x, k, rng);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  Vector<Scalar> dist(n);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    Scalar inertia = 0;
    for (Index i = 0; i < n; ++i) {
      const auto [c, d] = detail::nearest_centroid(x, i, model.centroids);
      changed |= labels[static_cast<std::size_t>(i)] != c;
      labels[static_cast<std::size_t>(i)] = c;
      dist(i) = d;
      inertia += d;
    }
    model.inertia_history.push_back(inertia);
    model.iterations_run = iter + 1;

    Matrix<Scalar> sums = Matrix<Scalar>::Zero(k, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      // Re-seed at the point farthest from its own centroid, taken from a
      // cluster that keeps at least one other member.
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        const int owner = labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(owner)] < 2) continue;
        if (far < 0 || dist(i) > dist(far)) far = i;
      }
      const int owner = labels[static_cast<std::size_t>(far)];
      sums.row(owner) -= x.row(far);
      --counts[static_cast<std::size_t>(owner)];
      sums.row(c) = x.row(far);
      counts[static_cast<std::size_t>(c)] = 1;
      labels[static_cast<std::size_t>(far)] = c;
      dist(far) = 0;
      changed = true;
    }
    Scalar shift = 0;
    for (int c = 0; c < k; ++c) {
      const RowVector<Scalar> mean = sums.row(c) / static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
      shift = std::max(shift, (mean - model.centroids.row(c)).norm());
      model.centroids.row(c) = mean;
    }
    if (!changed || shift < tol) break;
  }

  model.inertia = 0;
  for (Index i = 0; i < n; ++i) {
    model.inertia += (x.row(i) - model.centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  out.assignment.labels = std::move(labels);
  out.assignment.num_clusters = k;
  return out;
}

}  // namespace stugraph::cluster

#endif  // STUGRAPH_CLUSTER_KMEANS_HPP_
