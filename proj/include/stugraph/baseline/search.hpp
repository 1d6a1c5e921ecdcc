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

#ifndef STUGRAPH_BASELINE_SEARCH_HPP_
#define STUGRAPH_BASELINE_SEARCH_HPP_

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "stugraph/baseline/forest.hpp"
#include "stugraph/ingest/ingest.hpp"
#include "stugraph/metrics/metrics.hpp"

namespace stugraph::baseline {

struct ForestSearchSpace {
  int trees_min = 100;
  int trees_max = 500;
  int depth_min = 4;
  int depth_max = 32;
  /// Adds "unlimited" as one more depth choice.
  bool allow_unlimited_depth = true;
  Index leaf_min = 1;
  Index leaf_max = 8;

  void validate() const;
  nlohmann::json to_json() const;
  static ForestSearchSpace from_json(const nlohmann::json& j);
};

std::vector<ForestParams> sample_forest_params(const ForestSearchSpace& space, int n_combos,
                                               std::uint64_t seed);

/// Splits `rows` into `folds` disjoint parts with per-class round-robin
/// dealing. Throws if some fold would miss a class present in `rows`.
std::vector<std::vector<Index>> stratified_folds(const std::vector<int>& y, const std::vector<Index>& rows,
                                                 int folds, int num_classes, std::uint64_t seed);

struct MetricSummary {
  double mean = 0.0;
  /// Sample standard deviation over folds.
  double std = 0.0;
};

MetricSummary summarize(const std::vector<double>& values);

struct ComboResult {
  ForestParams params;
  std::vector<metrics::MetricsReport> folds;
  MetricSummary accuracy;
  MetricSummary macro_precision;
  MetricSummary macro_recall;
  MetricSummary macro_f1;
};

struct CvResult {
  std::vector<ComboResult> combos;
  int best = 0;

  nlohmann::json to_json() const;
};

struct BaselineResult {
  ForestParams best_params;
  CvResult cv;
  RandomForest model;
  std::vector<int> predictions;
  metrics::MetricsReport test_report;
};

/// Random search over forest settings scored by mean macro F1 across
/// stratified folds of train + val; the winner (ties to the earlier combo) is
/// refit on train + val and scored on the test mask.
BaselineResult cross_validate_search(const MatrixXd& x, const ingest::LabelVector& labels,
                                     const ingest::SplitMasks& masks, const ForestSearchSpace& space,
                                     int n_combos = 5, int folds = 5, std::uint64_t seed = 0);

}  // namespace stugraph::baseline

#endif  // STUGRAPH_BASELINE_SEARCH_HPP_
