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

#include "stugraph/ingest/ingest.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "stugraph/pipeline/synthetic.hpp"

namespace stugraph::ingest {
namespace {

const std::filesystem::path kSourceDir = STUGRAPH_SOURCE_DIR;

std::size_t count_true(const std::vector<bool>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

// Held-out counts for ceil(total * num / den) items: per-class floor, then one
// extra to the largest remainders, lowest class first on ties. Remainders are
// compared exactly as numerators over the common denominator `total`.
std::vector<std::size_t> oracle_apportion(const std::vector<std::size_t>& counts, std::size_t num,
                                          std::size_t den) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::size_t target = total * num / den;
  if (target * den < total * num) ++target;
  std::vector<std::size_t> take;
  std::vector<std::pair<std::size_t, std::size_t>> rem;  // (numerator, class)
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const std::size_t scaled = counts[c] * target;
    std::size_t floor = 0;
    while ((floor + 1) * total <= scaled) ++floor;
    take.push_back(floor);
    assigned += floor;
    rem.emplace_back(scaled - floor * total, c);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < target; ++i, ++assigned) ++take[rem[i].second];
  return take;
}

LabelVector labels_with_counts(const std::vector<std::size_t>& counts) {
  LabelVector y;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i) y.labels.push_back(static_cast<int>(c));
  }
  // Interleave so class membership is not contiguous.
  Rng rng(3);
  shuffle_in_place(y.labels, rng);
  return y;
}

TEST(LoadRaw, ParsesHeaderAndRows) {
  const auto t = parse_raw("a;b;c\n1;2;3\n4;5;6\n");
  EXPECT_EQ(t.num_columns(), 3);
  EXPECT_EQ(t.num_rows(), 2);
  EXPECT_EQ(t.rows[1][2], "6");
  EXPECT_EQ(t.column_index("b"), 1u);
}

TEST(LoadRaw, EmptyInputIsAnError) {
  try {
    parse_raw("");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty input"), std::string::npos);
  }
}

TEST(LoadRaw, HeaderOnlyGivesZeroRows) {
  const auto t = parse_raw("x;y\n");
  EXPECT_EQ(t.num_rows(), 0);
  EXPECT_EQ(t.num_columns(), 2);
}

TEST(LoadRaw, RaggedRowIsAnError) {
  EXPECT_THROW(parse_raw("a;b\n1;2\n3\n"), Error);
}

TEST(LoadRaw, MissingFileIsAnError) {
  EXPECT_THROW(load_raw("/nonexistent/students.csv"), Error);
}

TEST(LoadRaw, KeepsTabsInHeaderNames) {
  const auto t = parse_raw("Daytime/evening attendance\t;Target\n1;Graduate\n");
  EXPECT_EQ(t.column_names[0], "Daytime/evening attendance\t");
  EXPECT_EQ(repair_header(t.column_names[0]), "Daytime attendance");
  EXPECT_EQ(repair_header("Nacionality"), "Nationality");
}

TEST(AuditMissing, CountsBlankCells) {
  const auto t = parse_raw("A;B\n ;1\n;2\n3;4\n");
  EXPECT_EQ(audit_missing(t), (std::vector<std::size_t>{2, 0}));
  const auto blank = parse_raw("A;B\n;1\n;2\n;3\n");
  EXPECT_EQ(audit_missing(blank)[0], 3u);
}

TEST(Preprocess, OneHotAndMinMax) {
  const auto raw = parse_raw("color;size;flag;Target\nred;10;1;Dropout\nblue;20;0;Graduate\ngreen;30;1;Enrolled\n");
  const auto schema = Schema::from_json_text(R"({
    "target": "Target",
    "columns": {
      "color": {"kind": "categorical", "categories": ["red", "green", "blue"]},
      "size": "continuous",
      "flag": "boolean"
    }})");
  const auto fm = preprocess(raw, schema);
  ASSERT_EQ(fm.values.rows(), 3);
  ASSERT_EQ(fm.values.cols(), schema.output_width());
  // Categories in lexicographic order: blue, green, red.
  EXPECT_EQ(fm.feature_names[0], "color_blue");
  EXPECT_EQ(fm.values(0, 2), 1.0);
  EXPECT_EQ(fm.values(1, 0), 1.0);
  for (Index r = 0; r < 3; ++r) EXPECT_EQ(fm.values.row(r).head(3).sum(), 1.0);
  const Index size_col = std::find(fm.feature_names.begin(), fm.feature_names.end(), "size") -
                         fm.feature_names.begin();
  ASSERT_LT(size_col, fm.values.cols());
  EXPECT_EQ(fm.values(0, size_col), 0.0);
  EXPECT_EQ(fm.values(1, size_col), 0.5);
  EXPECT_EQ(fm.values(2, size_col), 1.0);
}

TEST(Preprocess, ConstantContinuousColumnMapsToZeroWithWarning) {
  const auto raw = parse_raw("v;Target\n5;Dropout\n5;Graduate\n");
  const auto schema = Schema::from_json_text(R"({"target": "Target", "columns": {"v": "continuous"}})");
  const auto fm = preprocess(raw, schema);
  EXPECT_EQ(fm.values.col(0).cwiseAbs().sum(), 0.0);
  EXPECT_FALSE(fm.warnings.empty());
}

TEST(Preprocess, UnseenCategoryIsAnError) {
  const auto raw = parse_raw("c;Target\nx;Dropout\nz;Graduate\n");
  const auto schema = Schema::from_json_text(
      R"({"target": "Target", "columns": {"c": {"kind": "categorical", "categories": ["x", "y"]}}})");
  EXPECT_THROW(preprocess(raw, schema), Error);
}

TEST(Preprocess, MissingCellsAbort) {
  const auto raw = parse_raw("v;Target\n;Dropout\n2;Graduate\n");
  const auto schema = Schema::from_json_text(R"({"target": "Target", "columns": {"v": "continuous"}})");
  EXPECT_THROW(preprocess(raw, schema), Error);
}

TEST(Preprocess, ShippedSchemaHas250Columns) {
  const auto schema = Schema::load(kSourceDir / "data" / "schema.json");
  EXPECT_EQ(schema.output_width(), 250);
  EXPECT_EQ(schema.target_column(), "Target");
}

TEST(Preprocess, InvariantsOnSyntheticTableWithShippedSchema) {
  const auto schema = Schema::load(kSourceDir / "data" / "schema.json");
  pipeline::SyntheticOptions options;
  options.rows = 400;
  const auto raw = parse_raw(pipeline::synthesize_dataset(schema, options));
  const auto fm = preprocess(raw, schema);
  ASSERT_EQ(fm.values.rows(), 400);
  ASSERT_EQ(fm.values.cols(), 250);
  EXPECT_GE(fm.values.minCoeff(), 0.0);
  EXPECT_LE(fm.values.maxCoeff(), 1.0);
  for (const auto& [begin, end] : fm.one_hot_groups) {
    for (Index r = 0; r < fm.values.rows(); ++r) {
      ASSERT_EQ(fm.values.row(r).segment(begin, end - begin).sum(), 1.0);
    }
    for (Index c = begin; c < end; ++c) {
      for (Index r = 0; r < fm.values.rows(); ++r) {
        const double v = fm.values(r, c);
        ASSERT_TRUE(v == 0.0 || v == 1.0);
      }
    }
  }
  // Bit-identical on a second pass.
  EXPECT_TRUE(preprocess(raw, schema).values == fm.values);
}

TEST(EncodeLabels, FixedMapping) {
  const auto raw = parse_raw("Target\nDropout\nGraduate\nEnrolled\n");
  EXPECT_EQ(encode_labels(raw, "Target").labels, (std::vector<int>{0, 2, 1}));
}

TEST(EncodeLabels, UnknownClassNamesTheValue) {
  const auto raw = parse_raw("Target\nDropout\nUnknown\n");
  try {
    encode_labels(raw, "Target");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("Unknown"), std::string::npos);
  }
}

TEST(StratifiedSplit, ApportionMatchesOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> counts;
    for (int c = 0; c < 3; ++c) counts.push_back(3 + uniform_index(rng, 3000));
    EXPECT_EQ(apportion(counts, 20, 100), oracle_apportion(counts, 20, 100));
    EXPECT_EQ(apportion(counts, 25, 100), oracle_apportion(counts, 25, 100));
  }
}

TEST(StratifiedSplit, DatasetSizedSplit) {
  // Class counts of the student table: Dropout, Enrolled, Graduate.
  const std::vector<std::size_t> counts{1421, 794, 2209};
  const auto masks = stratified_split(labels_with_counts(counts), 42);
  const auto test_oracle = oracle_apportion(counts, 20, 100);
  std::vector<std::size_t> rest(3);
  for (int c = 0; c < 3; ++c) rest[c] = counts[c] - test_oracle[c];
  const auto val_oracle = oracle_apportion(rest, 25, 100);
  const auto expect_test = std::accumulate(test_oracle.begin(), test_oracle.end(), std::size_t{0});
  const auto expect_val = std::accumulate(val_oracle.begin(), val_oracle.end(), std::size_t{0});
  EXPECT_EQ(count_true(masks.test), expect_test);
  EXPECT_EQ(count_true(masks.val), expect_val);
  EXPECT_EQ(count_true(masks.train), 4424 - expect_test - expect_val);
  EXPECT_EQ(count_true(masks.test), 885u);
  EXPECT_EQ(count_true(masks.val), 885u);
  EXPECT_EQ(count_true(masks.train), 2654u);
}

TEST(StratifiedSplit, SingleClassOfTen) {
  LabelVector y;
  y.labels.assign(10, 0);
  const auto masks = stratified_split(y, 1);
  EXPECT_EQ(count_true(masks.train), 6u);
  EXPECT_EQ(count_true(masks.val), 2u);
  EXPECT_EQ(count_true(masks.test), 2u);
}

TEST(StratifiedSplit, TooFewMembersIsAnError) {
  LabelVector y;
  y.labels = {0, 0, 0, 0, 0, 0, 1, 1};
  EXPECT_THROW(stratified_split(y, 1), Error);
}

TEST(StratifiedSplit, PropertiesOverRandomLabelings) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> counts;
    for (int c = 0; c < 3; ++c) counts.push_back(5 + uniform_index(rng, 500));
    const auto y = labels_with_counts(counts);
    const std::uint64_t seed = rng();
    const auto masks = stratified_split(y, seed);
    const auto again = stratified_split(y, seed);
    EXPECT_EQ(masks.train, again.train);
    EXPECT_EQ(masks.val, again.val);
    EXPECT_EQ(masks.test, again.test);
    const double n = static_cast<double>(y.labels.size());
    for (const auto* mask : {&masks.train, &masks.val, &masks.test}) {
      const double size = static_cast<double>(count_true(*mask));
      for (int c = 0; c < 3; ++c) {
        double in_class = 0;
        for (std::size_t i = 0; i < y.labels.size(); ++i) in_class += (*mask)[i] && y.labels[i] == c;
        EXPECT_LE(std::abs(in_class - size * static_cast<double>(counts[c]) / n), 1.0 + 1e-9);
      }
    }
    for (std::size_t i = 0; i < y.labels.size(); ++i) {
      EXPECT_EQ(int(masks.train[i]) + int(masks.val[i]) + int(masks.test[i]), 1);
    }
  }
}

}  // namespace
}  // namespace stugraph::ingest
