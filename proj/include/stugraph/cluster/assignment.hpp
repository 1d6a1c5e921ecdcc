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

#ifndef STUGRAPH_CLUSTER_ASSIGNMENT_HPP_
#define STUGRAPH_CLUSTER_ASSIGNMENT_HPP_

#include <vector>

#include "stugraph/common.hpp"

namespace stugraph::cluster {

inline constexpr int kNoise = -1;

/// Cluster id per point: 0..K-1, or kNoise.
struct ClusterAssignment {
  std::vector<int> labels;
  int num_clusters = 0;

  Index size() const { return static_cast<Index>(labels.size()); }
  std::vector<Index> cluster_sizes() const {
    std::vector<Index> sizes(static_cast<std::size_t>(num_clusters), 0);
    for (int l : labels) {
      if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
    }
    return sizes;
  }
  Index noise_count() const {
    Index c = 0;
    for (int l : labels) c += l == kNoise ? 1 : 0;
    return c;
  }
};

}  // namespace stugraph::cluster

#endif  // STUGRAPH_CLUSTER_ASSIGNMENT_HPP_
