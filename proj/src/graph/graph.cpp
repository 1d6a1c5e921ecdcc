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

#include "stugraph/graph/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stugraph/graph/kdtree.hpp"

namespace stugraph::graph {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace

Graph Graph::from_edges(Index n_nodes, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n_nodes));
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes) {
      throw Error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                  ") references a node outside [0, " + std::to_string(n_nodes) + ")");
    }
    if (u == v) throw Error("self-loop on node " + std::to_string(u));
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  std::vector<Index> offsets{0};
  std::vector<Index> neighbors;
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    neighbors.insert(neighbors.end(), list.begin(), list.end());
    offsets.push_back(static_cast<Index>(neighbors.size()));
  }
  Graph g;
  g.n_nodes_ = n_nodes;
  g.offsets_ = std::move(offsets);
  g.neighbors_ = std::move(neighbors);
  return g;
}

Graph Graph::from_csr(Index n_nodes, std::vector<Index> offsets, std::vector<Index> neighbors) {
  Graph g;
  g.n_nodes_ = n_nodes;
  g.offsets_ = std::move(offsets);
  g.neighbors_ = std::move(neighbors);
  g.validate();
  return g;
}

bool Graph::has_edge(Index u, Index v) const {
  const auto [b, e] = neighbors(u);
  return std::binary_search(b, e, v);
}

std::vector<std::pair<Index, Index>> Graph::edge_list() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(static_cast<std::size_t>(num_edges()));
  for (Index u = 0; u < n_nodes_; ++u) {
    const auto [b, e] = neighbors(u);
    for (const Index* p = std::upper_bound(b, e, u); p != e; ++p) out.emplace_back(u, *p);
  }
  return out;
}

void Graph::validate() const {
  if (static_cast<Index>(offsets_.size()) != n_nodes_ + 1 || offsets_.front() != 0 ||
      offsets_.back() != static_cast<Index>(neighbors_.size())) {
    throw Error("graph: CSR offsets are inconsistent");
  }
  for (Index v = 0; v < n_nodes_; ++v) {
    if (offsets_[v + 1] < offsets_[v]) throw Error("graph: offsets decrease");
    const auto [b, e] = neighbors(v);
    for (const Index* p = b; p != e; ++p) {
      if (*p < 0 || *p >= n_nodes_) throw Error("graph: neighbor out of range");
      if (*p == v) throw Error("graph: self-loop on node " + std::to_string(v));
      if (p + 1 != e && *(p + 1) <= *p) throw Error("graph: neighbor list not strictly sorted");
      if (!has_edge(*p, v)) {
        throw Error("graph: edge (" + std::to_string(v) + ", " + std::to_string(*p) +
                    ") has no reverse");
      }
    }
  }
}

Graph build_cluster_graph(const cluster::ClusterAssignment& assignment, Index max_edges) {
  const Index n = assignment.size();
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(assignment.num_clusters));
  for (Index i = 0; i < n; ++i) {
    const int l = assignment.labels[static_cast<std::size_t>(i)];
    if (l >= assignment.num_clusters) throw Error("cluster graph: label exceeds cluster count");
    if (l >= 0) members[static_cast<std::size_t>(l)].push_back(i);
  }
  Index predicted = 0;
  for (const auto& m : members) {
    const auto s = static_cast<Index>(m.size());
    predicted += s * (s - 1) / 2;
  }
  if (predicted > max_edges) {
    throw Error("cluster graph would have " + std::to_string(predicted) +
                " edges, above the cap of " + std::to_string(max_edges) +
                " (about " + std::to_string(predicted * 2 * 8 / (1 << 20)) +
                " MiB of adjacency); raise the cap or use a finer clustering");
  }
  std::vector<Index> offsets{0};
  std::vector<Index> neighbors;
  neighbors.reserve(static_cast<std::size_t>(2 * predicted));
  for (Index i = 0; i < n; ++i) {
    const int l = assignment.labels[static_cast<std::size_t>(i)];
    if (l >= 0) {
      for (Index j : members[static_cast<std::size_t>(l)]) {
        if (j != i) neighbors.push_back(j);
      }
    }
    offsets.push_back(static_cast<Index>(neighbors.size()));
  }
  return Graph::from_csr(n, std::move(offsets), std::move(neighbors));
}

KnnMode parse_knn_mode(const std::string& name) {
  if (name == "mutual") return KnnMode::kMutual;
  if (name == "union") return KnnMode::kUnion;
  throw Error("unknown k-NN mode '" + name + "' (expected mutual or union)");
}

std::string to_string(KnnMode mode) { return mode == KnnMode::kMutual ? "mutual" : "union"; }

Graph build_knn_graph(const MatrixXd& embedding, Index k, KnnMode mode, Index leaf_size) {
  const Index n = embedding.rows();
  if (k < 1 || k >= n) {
    throw Error("k-NN graph: k = " + std::to_string(k) + " must satisfy 1 <= k < N = " +
                std::to_string(n));
  }
  if (!embedding.allFinite()) throw Error("k-NN graph: embedding contains non-finite values");
  const KdTree<double> tree(embedding, leaf_size);
  std::vector<std::vector<Index>> knn(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (const auto& nb : tree.knn(embedding.row(i), k, i)) {
      knn[static_cast<std::size_t>(i)].push_back(nb.index);
    }
    std::sort(knn[static_cast<std::size_t>(i)].begin(), knn[static_cast<std::size_t>(i)].end());
  }
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j : knn[static_cast<std::size_t>(i)]) {
      const auto& back = knn[static_cast<std::size_t>(j)];
      const bool reciprocal = std::binary_search(back.begin(), back.end(), i);
      if (mode == KnnMode::kUnion || reciprocal) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

nlohmann::json GraphStats::to_json() const {
  return {{"n_nodes", n_nodes},         {"n_edges", n_edges},
          {"n_components", n_components}, {"density", density},
          {"min_degree", min_degree},   {"mean_degree", mean_degree},
          {"max_degree", max_degree},   {"isolated_nodes", isolated}};
}

std::vector<Index> connected_components(const Graph& graph) {
  const Index n = graph.num_nodes();
  DisjointSets sets(n);
  for (const auto& [u, v] : graph.edge_list()) sets.unite(u, v);
  std::vector<Index> id(static_cast<std::size_t>(n), -1);
  std::vector<Index> root_id(static_cast<std::size_t>(n), -1);
  Index next = 0;
  for (Index v = 0; v < n; ++v) {
    const Index r = sets.find(v);
    if (root_id[static_cast<std::size_t>(r)] < 0) root_id[static_cast<std::size_t>(r)] = next++;
    id[static_cast<std::size_t>(v)] = root_id[static_cast<std::size_t>(r)];
  }
  return id;
}

GraphStats graph_stats(const Graph& graph) {
  GraphStats s;
  const Index n = graph.num_nodes();
  s.n_nodes = n;
  s.n_edges = graph.num_edges();
  const auto comp = connected_components(graph);
  s.n_components = n == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  s.density = n < 2 ? 0.0
                    : 2.0 * static_cast<double>(s.n_edges) /
                          (static_cast<double>(n) * static_cast<double>(n - 1));
  if (n > 0) {
    s.min_degree = graph.degree(0);
    for (Index v = 0; v < n; ++v) {
      const Index d = graph.degree(v);
      s.min_degree = std::min(s.min_degree, d);
      s.max_degree = std::max(s.max_degree, d);
      s.isolated += d == 0 ? 1 : 0;
    }
    s.mean_degree = 2.0 * static_cast<double>(s.n_edges) / static_cast<double>(n);
  }
  return s;
}

std::vector<Index> clique_partition(const Graph& graph) {
  const Index n = graph.num_nodes();
  const auto comp = connected_components(graph);
  std::vector<Index> size;
  for (Index c : comp) {
    if (c >= static_cast<Index>(size.size())) size.resize(static_cast<std::size_t>(c + 1), 0);
    ++size[static_cast<std::size_t>(c)];
  }
  std::vector<Index> out(static_cast<std::size_t>(n), -1);
  Index next = 0;
  std::vector<Index> relabel(size.size(), -1);
  for (Index v = 0; v < n; ++v) {
    const Index c = comp[static_cast<std::size_t>(v)];
    if (graph.degree(v) != size[static_cast<std::size_t>(c)] - 1) return {};
    if (size[static_cast<std::size_t>(c)] == 1) continue;
    if (relabel[static_cast<std::size_t>(c)] < 0) relabel[static_cast<std::size_t>(c)] = next++;
    out[static_cast<std::size_t>(v)] = relabel[static_cast<std::size_t>(c)];
  }
  return out;
}

std::string format_edge_list(const Graph& graph) {
  std::ostringstream out;
  out << "# nodes " << graph.num_nodes() << '\n';
  for (const auto& [u, v] : graph.edge_list()) out << u << ' ' << v << '\n';
  return out.str();
}

void write_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write edge list " + path.string());
  out << format_edge_list(graph);
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Index n_nodes = -1;
  Index max_id = -1;
  std::size_t line_no = 0;
  std::vector<std::pair<Index, Index>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string word;
      Index count = 0;
      if (header >> word && word == "nodes" && header >> count) n_nodes = count;
      continue;
    }
    std::istringstream fields(line);
    Index u = 0;
    Index v = 0;
    std::string rest;
    if (!(fields >> u >> v) || (fields >> rest) || u < 0 || v <= u) {
      throw Error("edge list line " + std::to_string(line_no) + ": expected \"u v\" with 0 <= u < v, got '" +
                  line + "'");
    }
    max_id = std::max(max_id, v);
    edges.emplace_back(u, v);
  }
  if (n_nodes < 0) n_nodes = max_id + 1;
  if (max_id >= n_nodes) throw Error("edge list references node beyond the declared node count");
  return Graph::from_edges(n_nodes, edges);
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open edge list " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_edge_list(buffer.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace stugraph::graph
