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

#include <filesystem>
#include <string>
#include <vector>

#include "pipeline_fixture.hpp"
#include "stugraph/common.hpp"
#include "stugraph/pipeline/io.hpp"
#include "stugraph/pipeline/pipeline.hpp"

namespace stugraph::pipeline {
namespace {

using testing::report_hashes;
using testing::scratch_dir;
using testing::shrink_budget;
using testing::source_dir;
using testing::write_synthetic;

template <typename F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

RunConfig small_config(const fs::path& dir, const fs::path& data) {
  RunConfig c = RunConfig::load(source_dir() / "configs/umap10-hdbscan-sage.json");
  c.dataset = data;
  c.output_dir = dir / "out";
  c.models = {gnn::ModelKind::kSage, gnn::ModelKind::kGcn};
  c.baseline = true;
  shrink_budget(c);
  return c;
}

TEST(Io, GitBlobIdsMatchKnownValues) {
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Io, MatrixRoundTripIsExact) {
  const auto dir = scratch_dir("io_matrix");
  Rng rng(3);
  MatrixXd m(7, 4);
  for (Index i = 0; i < m.size(); ++i) m(i) = (uniform01(rng) - 0.5) * 1e3 / (i + 1);
  m(0, 0) = 1e-300;
  write_matrix_csv(dir / "m.csv", m, {"a", "b", "c", "d"});
  std::vector<std::string> header;
  const MatrixXd back = read_matrix_csv(dir / "m.csv", &header);
  EXPECT_EQ(header, (std::vector<std::string>{"a", "b", "c", "d"}));
  ASSERT_EQ(back.rows(), 7);
  EXPECT_EQ((back - m).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Io, LabelsMasksAssignmentPredictionsRoundTrip) {
  const auto dir = scratch_dir("io_misc");
  ingest::LabelVector labels;
  for (int i = 0; i < 40; ++i) labels.labels.push_back((i * 7) % 3);
  write_labels_csv(dir / "labels.csv", labels);
  EXPECT_EQ(read_labels_csv(dir / "labels.csv").labels, labels.labels);

  const auto masks = ingest::stratified_split(labels, 11);
  write_masks_json(dir / "masks.json", masks);
  const auto m = read_masks_json(dir / "masks.json");
  EXPECT_EQ(m.train, masks.train);
  EXPECT_EQ(m.val, masks.val);
  EXPECT_EQ(m.test, masks.test);
  EXPECT_EQ(m.seed, 11u);

  cluster::ClusterAssignment a;
  a.labels = {0, -1, 1, 1, 2, -1};
  a.num_clusters = 3;
  write_assignment_csv(dir / "a.csv", a);
  const auto a2 = read_assignment_csv(dir / "a.csv");
  EXPECT_EQ(a2.labels, a.labels);
  EXPECT_EQ(a2.num_clusters, 3);

  const std::vector<int> pred{2, 1, 0, 0, 2};
  write_predictions_csv(dir / "p.csv", pred);
  EXPECT_EQ(read_predictions_csv(dir / "p.csv"), pred);
}

TEST(Io, MalformedFilesNameTheFileAndFormat) {
  const auto dir = scratch_dir("io_bad");
  write_text(dir / "m.csv", "a,b\n1,2\n3\n");
  auto msg = error_of([&] { read_matrix_csv(dir / "m.csv"); });
  EXPECT_NE(msg.find("m.csv:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("expected a header row"), std::string::npos) << msg;

  write_text(dir / "p.csv", "index,prediction\n0,x\n");
  msg = error_of([&] { read_predictions_csv(dir / "p.csv"); });
  EXPECT_NE(msg.find("p.csv"), std::string::npos) << msg;
  EXPECT_NE(msg.find("index,prediction"), std::string::npos) << msg;

  write_text(dir / "masks.json", R"({"seed": 1, "n": 3, "train": [0, 1], "val": [1], "test": [2]})");
  msg = error_of([&] { read_masks_json(dir / "masks.json"); });
  EXPECT_NE(msg.find("masks.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("disjoint"), std::string::npos) << msg;

  write_text(dir / "j.json", "{not json");
  msg = error_of([&] { read_json(dir / "j.json"); });
  EXPECT_NE(msg.find("expected JSON"), std::string::npos) << msg;

  msg = error_of([&] { read_text(dir / "absent.txt"); });
  EXPECT_NE(msg.find("absent.txt"), std::string::npos) << msg;
}

TEST(Config, ShippedConfigsLoadAndResolvePaths) {
  for (const char* name : {"umap10-hdbscan-sage", "umap10-hdbscan-gcn", "pca-umap-knn-sage",
                           "pca-umap-knn-gcn"}) {
    const auto c = RunConfig::load(source_dir() / "configs" / (std::string(name) + ".json"));
    EXPECT_TRUE(c.dataset.is_absolute()) << name;
    EXPECT_TRUE(fs::exists(c.schema)) << name;
    EXPECT_TRUE(fs::exists(c.reference)) << name;
    EXPECT_EQ(c.seed, 42u);
    EXPECT_LE(c.trials, 20);
    EXPECT_EQ(c.search.patience, 15);
  }
}

TEST(Config, RelativePathsResolveAgainstBaseDir) {
  const nlohmann::json j = {{"dataset", "d/x.csv"}, {"schema", "s.json"}, {"output_dir", "out"}};
  const auto c = RunConfig::from_json(j, "/base");
  EXPECT_EQ(c.dataset, fs::path("/base/d/x.csv"));
  EXPECT_EQ(c.schema, fs::path("/base/s.json"));
  EXPECT_EQ(c.output_dir, fs::path("/base/out"));
  const auto abs = RunConfig::from_json({{"dataset", "/abs/x.csv"}}, "/base");
  EXPECT_EQ(abs.dataset, fs::path("/abs/x.csv"));
}

TEST(Config, InvalidValuesAreRejected) {
  EXPECT_NE(error_of([] { RunConfig::from_json({{"schema", "s.json"}}, "/"); }).find("dataset"),
            std::string::npos);
  EXPECT_NE(error_of([] { RunConfig::from_json({{"dataset", "x"}, {"delimiter", ";;"}}, "/"); })
                .find("delimiter"),
            std::string::npos);
  EXPECT_THROW(RunConfig::from_json({{"dataset", "x"}, {"strategy", "bogus"}}, "/"), Error);
  EXPECT_THROW(RunConfig::from_json({{"dataset", "x"}, {"models", {"mlp"}}}, "/"), Error);
  EXPECT_THROW(RunConfig::from_json({{"dataset", 3}}, "/"), Error);
}

TEST(Pipeline, MissingDatasetFailsBeforeAnyWork) {
  const auto dir = scratch_dir("missing");
  RunConfig c = RunConfig::load(source_dir() / "configs/umap10-hdbscan-sage.json");
  c.dataset = dir / "nope.csv";
  c.output_dir = dir / "out";
  const auto msg = error_of([&] { run_pipeline(c); });
  EXPECT_NE(msg.find("nope.csv"), std::string::npos) << msg;
  EXPECT_FALSE(fs::exists(c.output_dir));
}

TEST(Pipeline, FailingStageLeavesPartialManifest) {
  const auto dir = scratch_dir("failing");
  const auto data = write_synthetic(dir, 200, 5);
  RunConfig c = small_config(dir, data);
  c.max_edges = 1;
  const auto msg = error_of([&] { run_pipeline(c); });
  EXPECT_EQ(msg.rfind("stage graph: ", 0), 0u) << msg;
  const auto manifest = read_json(c.output_dir / "manifest.json");
  const auto status = manifest.at("status").get<std::string>();
  EXPECT_EQ(status.rfind("failed in stage graph: ", 0), 0u) << status;
  const auto& stages = manifest.at("stages");
  ASSERT_EQ(stages.size(), 4u);
  EXPECT_EQ(stages.back().at("stage"), "graph");
  EXPECT_TRUE(fs::exists(c.output_dir / "assignment.csv"));
  EXPECT_FALSE(fs::exists(c.output_dir / "report.json"));
}

TEST(Pipeline, EndToEndRunIsByteReproducible) {
  const auto dir = scratch_dir("e2e");
  const auto data = write_synthetic(dir, 300, 9);
  RunConfig c = small_config(dir, data);
  c.output_dir = dir / "run1";
  const auto first = run_pipeline(c);
  c.output_dir = dir / "run2";
  run_pipeline(c);

  const auto h1 = report_hashes(dir / "run1");
  const auto h2 = report_hashes(dir / "run2");
  EXPECT_EQ(h1, h2);
  for (const char* f : {"features.csv", "masks.json", "embedding.csv", "assignment.csv", "edges.txt",
                        "metrics_sage.json", "metrics_gcn.json", "metrics_rf.json", "comparison.csv",
                        "report.json", "checkpoint_sage.json", "history_gcn.csv"}) {
    EXPECT_TRUE(h1.count(f)) << f;
  }

  const auto manifest = read_json(dir / "run1/manifest.json");
  EXPECT_EQ(manifest.at("status"), "ok");
  for (const auto& [rel, blob] : manifest.at("outputs").items()) {
    (void)rel;
    const auto path = blob.at("path").get<std::string>();
    EXPECT_EQ(file_blob_sha1(dir / "run1" / path), blob.at("git_blob_sha1").get<std::string>()) << path;
  }
  EXPECT_EQ(manifest.at("outputs").size(), h1.size());

  // Three measured rows then the tagged reference rows.
  ASSERT_GT(first.table.rows.size(), 3u);
  EXPECT_EQ(first.table.rows[0].model, "GraphSAGE (UMAP(10) + HDBSCAN)");
  EXPECT_EQ(first.table.rows[1].model, "GCN (UMAP(10) + HDBSCAN)");
  EXPECT_EQ(first.table.rows[2].model, "Random Forest (tabular)");
  for (std::size_t i = 3; i < first.table.rows.size(); ++i) {
    EXPECT_EQ(first.table.rows[i].source, metrics::kReferenceTag);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GE(first.table.rows[i].accuracy, 0.0);
    EXPECT_LE(first.table.rows[i].accuracy, 1.0);
  }
}

TEST(Pipeline, KnnStrategySkipsClusterStage) {
  const auto dir = scratch_dir("knn");
  const auto data = write_synthetic(dir, 200, 4);
  RunConfig c = RunConfig::load(source_dir() / "configs/pca-umap-knn-sage.json");
  c.dataset = data;
  c.output_dir = dir / "out";
  shrink_budget(c);
  const auto outcome = run_pipeline(c);
  std::vector<std::string> names;
  for (const auto& s : outcome.manifest.stages) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"ingest", "reduce", "graph", "train_sage", "report"}));
  EXPECT_FALSE(fs::exists(c.output_dir / "assignment.csv"));
  const auto emb = read_json(c.output_dir / "embedding.json");
  EXPECT_EQ(emb.at("params").at("pca_components"), 50);
}

}  // namespace
}  // namespace stugraph::pipeline
