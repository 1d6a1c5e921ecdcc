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

#ifndef STUGRAPH_GRAPH_GRAPH_HPP_
#define STUGRAPH_GRAPH_GRAPH_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stugraph/cluster/assignment.hpp"
#include "stugraph/common.hpp"

namespace stugraph::graph {

/// Undirected, unweighted graph in CSR form. Neighbor lists are sorted,
/// duplicate-free and never contain the node itself.
class Graph {
 public:
  Graph() = default;
  /// Builds from an undirected edge list; pairs may appear in either
  /// orientation or twice. Self-loops are rejected.
  static Graph from_edges(Index n_nodes, const std::vector<std::pair<Index, Index>>& edges);
  /// Adopts CSR arrays that already satisfy the invariants (checked).
  static Graph from_csr(Index n_nodes, std::vector<Index> offsets, std::vector<Index> neighbors);

  Index num_nodes() const { return n_nodes_; }
  Index num_edges() const { return static_cast<Index>(neighbors_.size()) / 2; }
  Index degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }
  std::pair<const Index*, const Index*> neighbors(Index v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  bool has_edge(Index u, Index v) const;
  const std::vector<Index>& offsets() const { return offsets_; }
  const std::vector<Index>& adjacency() const { return neighbors_; }

  /// Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<std::pair<Index, Index>> edge_list() const;

  /// Throws if any structural invariant is violated.
  void validate() const;

 private:
  Index n_nodes_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<Index> neighbors_;
};

/// Edge (i, j) iff both share a cluster id that is not noise. Aborts before
/// allocation when the predicted edge count exceeds `max_edges`.
Graph build_cluster_graph(const cluster::ClusterAssignment& assignment,
                          Index max_edges = 50'000'000);

enum class KnnMode { kMutual, kUnion };

KnnMode parse_knn_mode(const std::string& name);
std::string to_string(KnnMode mode);

/// k-NN proximity graph over embedding rows using an exact KD-tree search.
Graph build_knn_graph(const MatrixXd& embedding, Index k, KnnMode mode = KnnMode::kMutual,
                      Index leaf_size = 16);

struct GraphStats {
  Index n_nodes = 0;
  Index n_edges = 0;
  Index n_components = 0;
  double density = 0.0;
  Index min_degree = 0;
  double mean_degree = 0.0;
  Index max_degree = 0;
  Index isolated = 0;

  nlohmann::json to_json() const;
};

GraphStats graph_stats(const Graph& graph);

/// Connected-component id per node (ids in order of first appearance).
std::vector<Index> connected_components(const Graph& graph);

/// When every connected component is a clique, returns its component id per
/// node (-1 for isolated nodes); otherwise returns an empty vector.
std::vector<Index> clique_partition(const Graph& graph);

/// Text edge list: a "# nodes N" header, then "u v" per line with u < v.
void write_edge_list(const Graph& graph, const std::filesystem::path& path);
std::string format_edge_list(const Graph& graph);
Graph read_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);

}  // namespace stugraph::graph

#endif  // STUGRAPH_GRAPH_GRAPH_HPP_
