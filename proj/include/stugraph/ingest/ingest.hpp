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

#ifndef STUGRAPH_INGEST_INGEST_HPP_
#define STUGRAPH_INGEST_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stugraph/common.hpp"

namespace stugraph::ingest {

/// Delimiter-separated table exactly as read: header names are not trimmed.
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::string>> rows;

  Index num_rows() const { return static_cast<Index>(rows.size()); }
  Index num_columns() const { return static_cast<Index>(column_names.size()); }
  /// Position of a column by exact name; throws if absent.
  std::size_t column_index(const std::string& name) const;
};

RawTable load_raw(const std::filesystem::path& path, char delimiter = ';');
RawTable parse_raw(const std::string& text, char delimiter = ';');

/// Empty or whitespace-only cells per column, in column order.
std::vector<std::size_t> audit_missing(const RawTable& raw);

/// Renames applied to raw header names before schema lookup.
const std::map<std::string, std::string>& header_repairs();
std::string repair_header(const std::string& name);

enum class ColumnKind { kCategorical, kContinuous, kBoolean, kTarget };

struct ColumnSpec {
  ColumnKind kind = ColumnKind::kContinuous;
  /// Declared category codes; only meaningful for categorical columns.
  std::vector<std::string> categories;
};

/// Column-kind declaration keyed by repaired header name.
struct Schema {
  std::map<std::string, ColumnSpec> columns;

  std::string target_column() const;
  /// Number of feature columns the schema produces.
  Index output_width() const;

  static Schema from_json_text(const std::string& text);
  static Schema load(const std::filesystem::path& path);
};

enum class FeatureKind { kOneHot, kScaledContinuous };

struct FeatureMatrix {
  MatrixXd values;
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> column_kinds;
  /// Half-open [begin, end) column ranges of each one-hot group.
  std::vector<std::pair<Index, Index>> one_hot_groups;
  std::vector<std::string> warnings;
};

FeatureMatrix preprocess(const RawTable& raw, const Schema& schema);

inline const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names{"Dropout", "Enrolled", "Graduate"};
  return names;
}

struct LabelVector {
  std::vector<int> labels;
  std::vector<std::string> names = class_names();

  Index size() const { return static_cast<Index>(labels.size()); }
  std::vector<std::size_t> counts() const;
};

LabelVector encode_labels(const RawTable& raw, const std::string& target_column);

struct SplitMasks {
  std::vector<bool> train;
  std::vector<bool> val;
  std::vector<bool> test;
  std::uint64_t seed = 0;

  static std::vector<Index> indices(const std::vector<bool>& mask);
};

/// Stratified 60/20/20 split: 20% test first, then 25% of the remainder for
/// validation. Per-class counts use floor plus largest-remainder rounding.
SplitMasks stratified_split(const LabelVector& labels, std::uint64_t seed);

/// Number of items of each class that go to the held-out side when taking
/// ceil(fraction * total) items overall. Exposed for testing.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& class_counts,
                                   std::size_t numerator, std::size_t denominator);

}  // namespace stugraph::ingest

#endif  // STUGRAPH_INGEST_INGEST_HPP_
