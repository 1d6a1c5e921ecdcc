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

#ifndef STUGRAPH_PIPELINE_PIPELINE_HPP_
#define STUGRAPH_PIPELINE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/baseline/search.hpp"
#include "stugraph/cluster/sweep.hpp"
#include "stugraph/gnn/train.hpp"
#include "stugraph/graph/graph.hpp"
#include "stugraph/metrics/metrics.hpp"
#include "stugraph/reduce/reduction.hpp"

namespace stugraph::pipeline {

enum class GraphStrategy { kClusterComembership, kKnnProximity };

GraphStrategy parse_strategy(const std::string& name);
std::string to_string(GraphStrategy strategy);

struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path schema;
  /// Reference-results document for the comparison table; optional.
  std::filesystem::path reference;
  std::filesystem::path output_dir = "runs/default";
  std::uint64_t seed = 42;
  char delimiter = ';';

  GraphStrategy strategy = GraphStrategy::kClusterComembership;
  reduce::ReductionSpec reduction;
  cluster::ClusteringSpec clustering;
  Index knn_k = 5;
  graph::KnnMode knn_mode = graph::KnnMode::kMutual;
  Index max_edges = 50'000'000;

  std::vector<gnn::ModelKind> models{gnn::ModelKind::kSage};
  gnn::SearchSpace search;
  int trials = 20;

  bool baseline = false;
  baseline::ForestSearchSpace forest;
  int forest_combos = 5;
  int forest_folds = 5;

  /// Paths in `j` are resolved against `base_dir`.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// Checks referenced inputs exist and settings are in range.
  void validate() const;
  /// Label of the graph strategy for table rows, e.g. "UMAP(10) + HDBSCAN".
  std::string graph_label() const;
};

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  std::vector<std::string> outputs;
};

struct RunManifest {
  nlohmann::json config;
  std::vector<StageRecord> stages;
  /// Input path -> git blob id.
  std::vector<std::pair<std::string, std::string>> inputs;
  /// Output path (relative to the output directory) -> git blob id.
  std::vector<std::pair<std::string, std::string>> outputs;
  std::string status = "running";

  nlohmann::json to_json() const;
};

struct RunOutcome {
  RunManifest manifest;
  metrics::ComparisonTable table;
  std::vector<std::pair<std::string, metrics::MetricsReport>> reports;
};

/// ingest -> reduce -> cluster (co-membership only) -> graph -> GNN search
/// and training -> metrics, plus the optional forest baseline. Writes every
/// artifact and manifest.json to config.output_dir. A failing stage leaves a
/// partial manifest and rethrows with the stage name.
RunOutcome run_pipeline(const RunConfig& config);

/// Per-stage seeds derived from the master seed; the stage subcommands use
/// the same derivation as run_pipeline.
std::uint64_t split_seed(std::uint64_t master);
std::uint64_t search_seed(std::uint64_t master, gnn::ModelKind kind);
std::uint64_t forest_seed(std::uint64_t master);

/// Table row name for a GNN on a given graph.
std::string model_display_name(gnn::ModelKind kind, const std::string& graph_label);

}  // namespace stugraph::pipeline

#endif  // STUGRAPH_PIPELINE_PIPELINE_HPP_
