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

#include "stugraph/cluster/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "stugraph/cluster/kmeans.hpp"
#include "stugraph/cluster/silhouette.hpp"

namespace stugraph::cluster {

std::string ClusteringSpec::label() const {
  if (method == Method::kKMeans) return "KMeans(k=" + std::to_string(k) + ")";
  return "HDBSCAN(min_cluster_size=" + std::to_string(hdbscan.min_cluster_size) +
         ",min_samples=" + std::to_string(hdbscan.min_samples) + ")";
}

nlohmann::json ClusteringSpec::to_json() const {
  if (method == Method::kKMeans) {
    return {{"method", "kmeans"}, {"k", k}, {"max_iter", max_iter}, {"tol", tol}};
  }
  return {{"method", "hdbscan"},
          {"min_cluster_size", hdbscan.min_cluster_size},
          {"min_samples", hdbscan.min_samples},
          {"metric", "euclidean"}};
}

ClusteringSpec ClusteringSpec::from_json(const nlohmann::json& j) {
  ClusteringSpec spec;
  const auto method = j.at("method").get<std::string>();
  if (method == "kmeans") {
    spec.method = Method::kKMeans;
  } else if (method == "hdbscan") {
    spec.method = Method::kHdbscan;
  } else {
    throw Error("unknown clustering method '" + method + "'");
  }
  spec.k = j.value("k", spec.k);
  spec.max_iter = j.value("max_iter", spec.max_iter);
  spec.tol = j.value("tol", spec.tol);
  spec.hdbscan.min_cluster_size = j.value("min_cluster_size", spec.hdbscan.min_cluster_size);
  spec.hdbscan.min_samples = j.value("min_samples", spec.hdbscan.min_samples);
  return spec;
}

ClusterAssignment run_clustering(const MatrixXd& x, const ClusteringSpec& spec,
                                 std::uint64_t seed) {
  if (spec.method == ClusteringSpec::Method::kKMeans) {
    return kmeans(x, spec.k, seed, spec.max_iter, spec.tol).assignment;
  }
  return hdbscan(x, spec.hdbscan).assignment;
}

std::vector<GridEntry> default_grid(const reduce::UmapParams& umap, const HdbscanParams& hdbscan) {
  using reduce::ReductionMethod;
  std::vector<reduce::ReductionSpec> reductions(3);
  reductions[0].method = ReductionMethod::kPca;
  reductions[0].components = 10;
  reductions[1].method = ReductionMethod::kUmap;
  reductions[1].components = 10;
  reductions[1].umap = umap;
  reductions[2].method = ReductionMethod::kPcaThenUmap;
  reductions[2].components = 10;
  reductions[2].intermediate = 50;
  reductions[2].umap = umap;
  std::vector<GridEntry> grid;
  for (const auto& r : reductions) {
    for (int k = 2; k <= 10; ++k) {
      ClusteringSpec c;
      c.method = ClusteringSpec::Method::kKMeans;
      c.k = k;
      grid.push_back({r, c});
    }
    ClusteringSpec c;
    c.method = ClusteringSpec::Method::kHdbscan;
    c.hdbscan = hdbscan;
    grid.push_back({r, c});
  }
  return grid;
}

std::uint64_t reduction_seed(std::uint64_t master) { return derive_seed(master, 0x5244); }

std::uint64_t clustering_seed(std::uint64_t master, std::size_t grid_index) {
  return derive_seed(master, 0x434c0000ULL + grid_index);
}

std::vector<SweepEntry> sweep_configurations(const MatrixXd& x, const std::vector<GridEntry>& grid,
                                             std::uint64_t seed) {
  if (grid.empty()) throw Error("sweep: grid is empty");
  std::map<std::string, MatrixXd> embeddings;
  std::vector<SweepEntry> out;
  out.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& spec = grid[g];
    const std::string key = spec.reduction.to_json().dump();
    auto it = embeddings.find(key);
    if (it == embeddings.end()) {
      it = embeddings.emplace(key, reduce::reduce(x, spec.reduction, reduction_seed(seed)).values)
               .first;
    }
    SweepEntry entry;
    entry.grid_index = g;
    entry.spec = spec;
    entry.reduction_seed = reduction_seed(seed);
    entry.clustering_seed = clustering_seed(seed, g);
    const auto assignment = run_clustering(it->second, spec.clustering, entry.clustering_seed);
    entry.num_clusters = assignment.num_clusters;
    entry.noise = assignment.noise_count();
    const auto sizes = assignment.cluster_sizes();
    const auto populated = std::count_if(sizes.begin(), sizes.end(), [](Index s) { return s > 0; });
    entry.silhouette = populated >= 2 ? silhouette(it->second, assignment).score
                                      : -std::numeric_limits<double>::infinity();
    out.push_back(std::move(entry));
  }
  std::stable_sort(out.begin(), out.end(), [](const SweepEntry& a, const SweepEntry& b) {
    return a.silhouette > b.silhouette;
  });
  return out;
}

nlohmann::json to_json(const std::vector<SweepEntry>& ranked) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : ranked) {
    nlohmann::json sil = std::isfinite(e.silhouette) ? nlohmann::json(e.silhouette)
                                                      : nlohmann::json("-inf");
    arr.push_back({{"rank", arr.size() + 1},
                   {"grid_index", e.grid_index},
                   {"reduction", e.spec.reduction.label()},
                   {"clustering", e.spec.clustering.label()},
                   {"params",
                    {{"reduction", e.spec.reduction.to_json()},
                     {"clustering", e.spec.clustering.to_json()},
                     {"reduction_seed", e.reduction_seed},
                     {"clustering_seed", e.clustering_seed}}},
                   {"num_clusters", e.num_clusters},
                   {"noise", e.noise},
                   {"silhouette", sil}});
  }
  return arr;
}

}  // namespace stugraph::cluster
