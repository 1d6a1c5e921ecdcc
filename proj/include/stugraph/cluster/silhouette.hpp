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

#ifndef STUGRAPH_CLUSTER_SILHOUETTE_HPP_
#define STUGRAPH_CLUSTER_SILHOUETTE_HPP_

#include <algorithm>
#include <limits>
#include <vector>

#include "stugraph/cluster/assignment.hpp"
#include "stugraph/common.hpp"
#include "stugraph/parallel.hpp"

namespace stugraph::cluster {

template <typename Scalar>
struct SilhouetteResult {
  Scalar score = 0;
  /// Per-point values; NaN for excluded (noise) points.
  std::vector<Scalar> per_point;
  Index excluded_noise = 0;
};

/// Mean silhouette over non-noise points. Singleton clusters contribute 0 and
/// noise is excluded from both the mean and the nearest-cluster search.
template <typename Derived>
SilhouetteResult<typename Derived::Scalar> silhouette(const Eigen::MatrixBase<Derived>& data,
                                                      const ClusterAssignment& assignment) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> x = data;
  const Index n = x.rows();
  if (assignment.size() != n) {
    throw Error("silhouette: assignment has " + std::to_string(assignment.size()) +
                " labels for " + std::to_string(n) + " points");
  }
  const auto sizes = assignment.cluster_sizes();
  const auto populated = std::count_if(sizes.begin(), sizes.end(), [](Index s) { return s > 0; });
  if (populated < 2) throw Error("silhouette undefined: fewer than two clusters");

  const std::size_t k = sizes.size();
  SilhouetteResult<Scalar> out;
  out.per_point.assign(static_cast<std::size_t>(n), std::numeric_limits<Scalar>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
    const int own = assignment.labels[ii];
    if (own < 0) return;
    const auto i = static_cast<Index>(ii);
    std::vector<Scalar> sums(k, Scalar(0));
    for (Index j = 0; j < n; ++j) {
      const int l = assignment.labels[static_cast<std::size_t>(j)];
      if (l < 0 || j == i) continue;
      sums[static_cast<std::size_t>(l)] += (x.row(i) - x.row(j)).norm();
    }
    const Index own_size = sizes[static_cast<std::size_t>(own)];
    if (own_size == 1) {
      out.per_point[ii] = 0;
      return;
    }
    const Scalar a = sums[static_cast<std::size_t>(own)] / static_cast<Scalar>(own_size - 1);
    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (static_cast<int>(c) == own || sizes[c] == 0) continue;
      b = std::min(b, sums[c] / static_cast<Scalar>(sizes[c]));
    }
    const Scalar denom = std::max(a, b);
    out.per_point[ii] = denom > 0 ? (b - a) / denom : Scalar(0);
  });

  Scalar total = 0;
  Index counted = 0;
  for (std::size_t i = 0; i < out.per_point.size(); ++i) {
    if (assignment.labels[i] < 0) {
      ++out.excluded_noise;
    } else {
      total += out.per_point[i];
      ++counted;
    }
  }
  out.score = total / static_cast<Scalar>(counted);
  return out;
}

}  // namespace stugraph::cluster

#endif  // STUGRAPH_CLUSTER_SILHOUETTE_HPP_
