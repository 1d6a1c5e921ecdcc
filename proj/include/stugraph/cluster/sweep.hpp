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

#ifndef STUGRAPH_CLUSTER_SWEEP_HPP_
#define STUGRAPH_CLUSTER_SWEEP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/cluster/assignment.hpp"
#include "stugraph/cluster/hdbscan.hpp"
#include "stugraph/reduce/reduction.hpp"

namespace stugraph::cluster {

struct ClusteringSpec {
  enum class Method { kKMeans, kHdbscan };
  Method method = Method::kHdbscan;
  int k = 2;
  int max_iter = 300;
  double tol = 1e-8;
  HdbscanParams hdbscan;

  std::string label() const;
  nlohmann::json to_json() const;
  static ClusteringSpec from_json(const nlohmann::json& j);
};

ClusterAssignment run_clustering(const MatrixXd& x, const ClusteringSpec& spec,
                                 std::uint64_t seed);

struct GridEntry {
  reduce::ReductionSpec reduction;
  ClusteringSpec clustering;
};

/// {PCA(10), UMAP(10), PCA(50)->UMAP(10)} x {KMeans k = 2..10, HDBSCAN}.
std::vector<GridEntry> default_grid(const reduce::UmapParams& umap = {},
                                    const HdbscanParams& hdbscan = {});

struct SweepEntry {
  std::size_t grid_index = 0;
  GridEntry spec;
  /// -infinity when the silhouette is undefined (fewer than two clusters).
  double silhouette = 0.0;
  int num_clusters = 0;
  Index noise = 0;
  std::uint64_t reduction_seed = 0;
  std::uint64_t clustering_seed = 0;
};

/// Seed used for every reduction of a run; shared so that the pipeline's
/// reduce stage reproduces the sweep's embedding for the same master seed.
std::uint64_t reduction_seed(std::uint64_t master);
std::uint64_t clustering_seed(std::uint64_t master, std::size_t grid_index);

/// Runs every grid entry and ranks by descending silhouette; equal scores keep
/// grid order. Identical reductions are computed once.
std::vector<SweepEntry> sweep_configurations(const MatrixXd& x, const std::vector<GridEntry>& grid,
                                             std::uint64_t seed);

nlohmann::json to_json(const std::vector<SweepEntry>& ranked);

}  // namespace stugraph::cluster

#endif  // STUGRAPH_CLUSTER_SWEEP_HPP_
