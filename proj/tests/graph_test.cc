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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <queue>
#include <set>
#include <vector>

#include "stugraph/graph/graph.hpp"
#include "stugraph/graph/kdtree.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace stugraph::graph {
namespace {

using testing::brute_knn;
using testing::brute_knn_edges;
using testing::edges_of;
using testing::EdgeSet;
using testing::random_graph;
using testing::random_matrix;

Index bfs_components(const Graph& g) {
  std::vector<char> seen(static_cast<std::size_t>(g.num_nodes()), 0);
  Index count = 0;
  for (Index s = 0; s < g.num_nodes(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<Index> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      const auto [b, e] = g.neighbors(v);
      for (const Index* p = b; p != e; ++p) {
        if (!seen[*p]) {
          seen[*p] = 1;
          q.push(*p);
        }
      }
    }
  }
  return count;
}

void expect_well_formed(const Graph& g) {
  for (Index v = 0; v < g.num_nodes(); ++v) {
    const auto [b, e] = g.neighbors(v);
    for (const Index* p = b; p != e; ++p) {
      EXPECT_NE(*p, v);
      EXPECT_TRUE(g.has_edge(*p, v));
      if (p + 1 != e) {
        EXPECT_LT(*p, *(p + 1));
      }
    }
  }
}

TEST(KdTree, MatchesBruteForce) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 20 + static_cast<Index>(uniform_index(rng, 200));
    const Index d = 1 + static_cast<Index>(uniform_index(rng, 4));
    const MatrixXd x = random_matrix(n, d, rng);
    const Index k = 1 + static_cast<Index>(uniform_index(rng, 8));
    const auto tree = all_knn<double>(x, k, 4);
    const auto brute = brute_knn(x, k);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < k; ++j) EXPECT_EQ(tree.indices(i, j), brute[i][j]);
    }
  }
}

TEST(KdTree, EveryPointInExactlyOneLeaf) {
  Rng rng(2);
  const KdTree<double> tree(random_matrix(300, 3, rng), 16);
  std::vector<int> hits(300, 0);
  for (const auto& leaf : tree.leaves()) {
    for (Index p : leaf) ++hits[p];
  }
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST(KdTree, DistanceTiesGoToLowerIndex) {
  MatrixXd x(4, 1);
  x << 0, 1, -1, 5;
  const auto t = all_knn<double>(x, 1);
  EXPECT_EQ(t.indices(0, 0), 1);
}

TEST(ClusterGraph, EdgeRule) {
  // {a,b,c}, {d,e}, noise f.
  const cluster::ClusterAssignment a{{0, 0, 0, 1, 1, -1}, 2};
  const auto g = build_cluster_graph(a);
  EXPECT_EQ(edges_of(g), (EdgeSet{{0, 1}, {0, 2}, {1, 2}, {3, 4}}));
  EXPECT_EQ(g.degree(5), 0);
}

TEST(ClusterGraph, AllNoise) {
  const cluster::ClusterAssignment a{{-1, -1, -1, -1}, 0};
  const auto g = build_cluster_graph(a);
  EXPECT_EQ(g.num_edges(), 0);
  EXPECT_EQ(graph_stats(g).n_components, 4);
}

TEST(ClusterGraph, EdgeCountAndCliqueStructure) {
  Rng rng(3);
  cluster::ClusterAssignment a{{}, 3};
  for (int i = 0; i < 500; ++i) a.labels.push_back(static_cast<int>(uniform_index(rng, 4)) - 1);
  const auto g = build_cluster_graph(a);
  Index expected = 0;
  for (int c = 0; c < 3; ++c) {
    const Index s = std::count(a.labels.begin(), a.labels.end(), c);
    expected += s * (s - 1) / 2;
  }
  EXPECT_EQ(g.num_edges(), expected);
  for (Index u = 0; u < 500; u += 3) {
    for (Index v = 0; v < 500; ++v) {
      if (u == v) continue;
      const bool same = a.labels[u] >= 0 && a.labels[u] == a.labels[v];
      EXPECT_EQ(g.has_edge(u, v), same);
    }
  }
  expect_well_formed(g);
}

TEST(ClusterGraph, MemoryGuard) {
  const cluster::ClusterAssignment a{std::vector<int>(100, 0), 1};
  try {
    build_cluster_graph(a, 100);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("4950"), std::string::npos) << e.what();
  }
}

TEST(KnnGraph, HandCheck) {
  MatrixXd x(3, 1);
  x << 0, 1, 3;
  EXPECT_EQ(edges_of(build_knn_graph(x, 1, KnnMode::kMutual)), (EdgeSet{{0, 1}}));
  EXPECT_EQ(edges_of(build_knn_graph(x, 1, KnnMode::kUnion)), (EdgeSet{{0, 1}, {1, 2}}));
}

TEST(KnnGraph, MatchesBruteForceAt200) {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXd x = random_matrix(200, 2, rng);
    const auto mutual = build_knn_graph(x, 5, KnnMode::kMutual);
    const auto uni = build_knn_graph(x, 5, KnnMode::kUnion);
    EXPECT_EQ(edges_of(mutual), brute_knn_edges(x, 5, true));
    EXPECT_EQ(edges_of(uni), brute_knn_edges(x, 5, false));
    const auto m = edges_of(mutual);
    const auto u = edges_of(uni);
    EXPECT_TRUE(std::includes(u.begin(), u.end(), m.begin(), m.end()));
    EXPECT_LE(graph_stats(mutual).max_degree, 5);
    EXPECT_LE(graph_stats(uni).max_degree, 10);
    expect_well_formed(mutual);
    expect_well_formed(uni);
  }
}

TEST(KnnGraph, KTooLargeIsAnError) {
  const MatrixXd x = MatrixXd::Zero(4, 2);
  EXPECT_THROW(build_knn_graph(x, 4), Error);
}

TEST(Stats, FiveClique) {
  std::vector<std::pair<Index, Index>> e;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = i + 1; j < 5; ++j) e.emplace_back(i, j);
  }
  const auto s = graph_stats(Graph::from_edges(5, e));
  EXPECT_EQ(s.density, 1.0);
  EXPECT_EQ(s.n_components, 1);
  EXPECT_EQ(s.min_degree, 4);
  EXPECT_EQ(s.max_degree, 4);
}

TEST(Stats, IsolatedNodes) {
  const auto s = graph_stats(Graph::from_edges(7, {}));
  EXPECT_EQ(s.density, 0.0);
  EXPECT_EQ(s.n_components, 7);
  EXPECT_EQ(s.isolated, 7);
}

TEST(Stats, ComponentsMatchBfs) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(100, 0.01 + 0.02 * uniform01(rng), rng);
    const auto s = graph_stats(g);
    EXPECT_EQ(s.n_components, bfs_components(g));
    EXPECT_GE(s.density, 0.0);
    EXPECT_LE(s.density, 1.0);
  }
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange) {
  EXPECT_THROW(Graph::from_edges(3, {{1, 1}}), Error);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), Error);
}

TEST(Graph, DuplicateEdgesCollapse) {
  const auto g = Graph::from_edges(3, {{0, 1}, {1, 0}, {0, 1}});
  EXPECT_EQ(g.num_edges(), 1);
}

TEST(CliquePartition, DetectsCliqueComponents) {
  const cluster::ClusterAssignment a{{0, 0, 1, -1, 1, 1}, 2};
  const auto part = clique_partition(build_cluster_graph(a));
  ASSERT_EQ(part.size(), 6u);
  EXPECT_EQ(part[0], part[1]);
  EXPECT_EQ(part[2], part[4]);
  EXPECT_EQ(part[2], part[5]);
  EXPECT_NE(part[0], part[2]);
  EXPECT_EQ(part[3], -1);
  // A path is not a clique.
  EXPECT_TRUE(clique_partition(Graph::from_edges(3, {{0, 1}, {1, 2}})).empty());
}

TEST(EdgeList, RoundTripIsIdentity) {
  Rng rng(6);
  const auto g = random_graph(40, 0.1, rng);
  const std::string text = format_edge_list(g);
  const auto back = parse_edge_list(text);
  EXPECT_EQ(back.num_nodes(), 40);
  EXPECT_EQ(edges_of(back), edges_of(g));
  EXPECT_EQ(format_edge_list(back), text);

  const auto path = std::filesystem::temp_directory_path() / "stugraph_edges_test.txt";
  write_edge_list(g, path);
  EXPECT_EQ(edges_of(read_edge_list(path)), edges_of(g));
  std::filesystem::remove(path);
}

TEST(EdgeList, MalformedLineNamesTheLine) {
  try {
    parse_edge_list("# nodes 3\n0 1\n1 x\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace stugraph::graph
