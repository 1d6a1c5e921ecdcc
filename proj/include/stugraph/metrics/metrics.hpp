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

#ifndef STUGRAPH_METRICS_METRICS_HPP_
#define STUGRAPH_METRICS_METRICS_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stugraph/common.hpp"

namespace stugraph::metrics {

/// K x K counts; rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes = 3);
  static ConfusionMatrix from_labels(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                     int num_classes);

  int num_classes() const { return k_; }
  Index at(int truth, int predicted) const { return counts_[static_cast<std::size_t>(truth * k_ + predicted)]; }
  void add(int truth, int predicted);
  Index total() const { return total_; }
  Index tp(int c) const { return at(c, c); }
  Index fp(int c) const;
  Index fn(int c) const;
  Index tn(int c) const { return total_ - tp(c) - fp(c) - fn(c); }

  nlohmann::json to_json() const;

 private:
  int k_;
  std::vector<Index> counts_;
  Index total_ = 0;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Index support = 0;
  /// Set when the corresponding ratio was 0/0 and reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct MetricsReport {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<std::string> class_names;
  ConfusionMatrix confusion;

  bool any_undefined() const;
  nlohmann::json to_json() const;
};

MetricsReport evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred, int num_classes = 3,
                       std::vector<std::string> class_names = {});

/// evaluate restricted to positions where mask is set.
MetricsReport evaluate_masked(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                              const std::vector<bool>& mask, int num_classes = 3,
                              std::vector<std::string> class_names = {});

/// "77.56%" for 0.7756.
std::string format_percent(double fraction);

struct ComparisonRow {
  std::string model;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::string source;
};

inline constexpr const char* kReferenceTag = "published reference (not reproduced)";

struct ComparisonTable {
  std::vector<ComparisonRow> rows;

  std::string to_csv() const;
  std::string to_text() const;
  nlohmann::json to_json() const;
};

/// Overall rows of a reference-results document.
std::vector<ComparisonRow> reference_rows(const nlohmann::json& reference);
std::vector<ComparisonRow> load_reference_rows(const std::filesystem::path& path);

/// One row per report (macro averages), followed by the reference rows.
ComparisonTable compare_report(const std::vector<std::pair<std::string, MetricsReport>>& reports,
                               const std::vector<ComparisonRow>& reference = {});

}  // namespace stugraph::metrics

#endif  // STUGRAPH_METRICS_METRICS_HPP_
