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

#ifndef STUGRAPH_CLUSTER_HDBSCAN_HPP_
#define STUGRAPH_CLUSTER_HDBSCAN_HPP_

#include <map>
#include <vector>

#include "stugraph/cluster/assignment.hpp"
#include "stugraph/common.hpp"

namespace stugraph::cluster {

struct HdbscanParams {
  Index min_cluster_size = 15;
  Index min_samples = 15;
};

struct MstEdge {
  Index a = 0;
  Index b = 0;
  double weight = 0.0;
};

/// One merge of the single-linkage hierarchy. Ids below N are points; id
/// N + i is the cluster created by merge i.
struct LinkageStep {
  Index left = 0;
  Index right = 0;
  double distance = 0.0;
  Index size = 0;
};

struct CondensedEdge {
  Index parent = 0;
  Index child = 0;
  double lambda = 0.0;  // 1 / distance at which the child leaves the parent
  Index child_size = 0;
};

/// Hierarchy pruned at min_cluster_size. Cluster ids start at N (the root).
struct CondensedTree {
  std::vector<CondensedEdge> edges;
  std::map<Index, double> stability;
  Index root = 0;
};

/// Distance to the min_samples-th nearest other point.
VectorXd core_distances(const MatrixXd& x, Index min_samples);

/// Exact minimum spanning tree of the mutual-reachability graph
/// max(core(a), core(b), |a - b|) by dense Prim. Edges sorted by weight.
std::vector<MstEdge> mutual_reachability_mst(const MatrixXd& x, const VectorXd& core);

std::vector<LinkageStep> single_linkage(const std::vector<MstEdge>& mst, Index n);

CondensedTree condense_tree(const std::vector<LinkageStep>& hierarchy, Index n,
                            Index min_cluster_size);

/// Excess-of-mass selection; the root is never selected.
std::vector<Index> select_clusters_eom(const CondensedTree& tree);

ClusterAssignment label_points(const CondensedTree& tree, const std::vector<Index>& selected,
                               Index n);

struct HdbscanResult {
  ClusterAssignment assignment;
  CondensedTree tree;
  std::vector<MstEdge> mst;
};

HdbscanResult hdbscan(const MatrixXd& x, const HdbscanParams& params);

}  // namespace stugraph::cluster

#endif  // STUGRAPH_CLUSTER_HDBSCAN_HPP_
