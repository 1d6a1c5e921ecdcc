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

#include "stugraph/pipeline/pipeline.hpp"

#include <chrono>
#include <functional>

#include "stugraph/cluster/silhouette.hpp"
#include "stugraph/ingest/ingest.hpp"
#include "stugraph/pipeline/io.hpp"

namespace stugraph::pipeline {
namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

std::uint64_t split_seed(std::uint64_t master) { return derive_seed(master, 0x53504c54); }
std::uint64_t search_seed(std::uint64_t master, gnn::ModelKind kind) {
  return derive_seed(master, 0x474e4e00 + static_cast<std::uint64_t>(kind));
}
std::uint64_t forest_seed(std::uint64_t master) { return derive_seed(master, 0x52460000); }

GraphStrategy parse_strategy(const std::string& name) {
  if (name == "cluster-comembership") return GraphStrategy::kClusterComembership;
  if (name == "knn-proximity") return GraphStrategy::kKnnProximity;
  throw Error("unknown graph strategy '" + name + "' (expected cluster-comembership or knn-proximity)");
}

std::string to_string(GraphStrategy strategy) {
  return strategy == GraphStrategy::kClusterComembership ? "cluster-comembership" : "knn-proximity";
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  RunConfig c;
  try {
    if (!j.contains("dataset")) throw Error("config: \"dataset\" is required");
    c.dataset = resolve(base_dir, j.at("dataset").get<std::string>());
    c.schema = resolve(base_dir, j.value("schema", std::string("data/schema.json")));
    if (j.contains("reference")) c.reference = resolve(base_dir, j.at("reference").get<std::string>());
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    c.seed = j.value("seed", c.seed);
    const auto delim = j.value("delimiter", std::string(";"));
    if (delim.size() != 1) throw Error("config: delimiter must be a single character");
    c.delimiter = delim[0];
    c.strategy = parse_strategy(j.value("strategy", to_string(c.strategy)));
    if (j.contains("reduction")) c.reduction = reduce::ReductionSpec::from_json(j.at("reduction"));
    if (j.contains("clustering")) c.clustering = cluster::ClusteringSpec::from_json(j.at("clustering"));
    if (j.contains("knn")) {
      c.knn_k = j.at("knn").value("k", c.knn_k);
      c.knn_mode = graph::parse_knn_mode(j.at("knn").value("mode", std::string("mutual")));
    }
    c.max_edges = j.value("max_edges", c.max_edges);
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j.at("models")) c.models.push_back(gnn::parse_model_kind(m.get<std::string>()));
    }
    if (j.contains("search")) {
      c.search = gnn::SearchSpace::from_json(j.at("search"));
      c.trials = j.at("search").value("trials", c.trials);
    }
    if (j.contains("baseline")) {
      const auto& b = j.at("baseline");
      if (b.is_boolean()) {
        c.baseline = b.get<bool>();
      } else {
        c.baseline = b.value("enabled", true);
        c.forest = baseline::ForestSearchSpace::from_json(b);
        c.forest_combos = b.value("combos", c.forest_combos);
        c.forest_folds = b.value("folds", c.forest_folds);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  return from_json(read_json(path), fs::absolute(path).parent_path());
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json models_json = nlohmann::json::array();
  for (auto m : models) models_json.push_back(gnn::to_string(m));
  nlohmann::json search_json = search.to_json();
  search_json["trials"] = trials;
  nlohmann::json baseline_json = forest.to_json();
  baseline_json["enabled"] = baseline;
  baseline_json["combos"] = forest_combos;
  baseline_json["folds"] = forest_folds;
  return {{"dataset", dataset.string()},
          {"schema", schema.string()},
          {"reference", reference.string()},
          {"output_dir", output_dir.string()},
          {"seed", seed},
          {"delimiter", std::string(1, delimiter)},
          {"strategy", to_string(strategy)},
          {"reduction", reduction.to_json()},
          {"clustering", clustering.to_json()},
          {"knn", {{"k", knn_k}, {"mode", graph::to_string(knn_mode)}}},
          {"max_edges", max_edges},
          {"models", models_json},
          {"search", search_json},
          {"baseline", baseline_json}};
}

void RunConfig::validate() const {
  if (dataset.empty() || !fs::exists(dataset)) throw Error("config: dataset '" + dataset.string() + "' does not exist");
  if (!fs::exists(schema)) throw Error("config: schema '" + schema.string() + "' does not exist");
  if (!reference.empty() && !fs::exists(reference)) {
    throw Error("config: reference results '" + reference.string() + "' do not exist");
  }
  if (models.empty()) throw Error("config: at least one model is required");
  if (trials < 1) throw Error("config: search.trials must be at least 1");
  if (strategy == GraphStrategy::kKnnProximity && knn_k < 1) throw Error("config: knn.k must be positive");
  search.validate();
  if (baseline) forest.validate();
}

std::string RunConfig::graph_label() const {
  if (strategy == GraphStrategy::kClusterComembership) {
    const std::string method = clustering.method == cluster::ClusteringSpec::Method::kHdbscan
                                   ? "HDBSCAN"
                                   : "KMeans(" + std::to_string(clustering.k) + ")";
    return reduction.label() + " + " + method;
  }
  return reduction.label() + " + " + graph::to_string(knn_mode) + " " + std::to_string(knn_k) + "-NN";
}

std::string model_display_name(gnn::ModelKind kind, const std::string& graph_label) {
  return std::string(kind == gnn::ModelKind::kGcn ? "GCN" : "GraphSAGE") + " (" + graph_label + ")";
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json stage_json = nlohmann::json::array();
  for (const auto& s : stages) {
    stage_json.push_back({{"stage", s.name}, {"seconds", s.seconds}, {"outputs", s.outputs}});
  }
  auto hashes = [](const std::vector<std::pair<std::string, std::string>>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [path, hash] : v) out.push_back({{"path", path}, {"git_blob_sha1", hash}});
    return out;
  };
  return {{"status", status}, {"config", config}, {"stages", stage_json},
          {"inputs", hashes(inputs)}, {"outputs", hashes(outputs)}};
}

RunOutcome run_pipeline(const RunConfig& config) {
  config.validate();
  const fs::path out = config.output_dir;
  fs::create_directories(out);

  RunOutcome outcome;
  RunManifest& manifest = outcome.manifest;
  manifest.config = config.to_json();
  manifest.inputs.emplace_back(config.dataset.string(), file_blob_sha1(config.dataset));
  manifest.inputs.emplace_back(config.schema.string(), file_blob_sha1(config.schema));
  if (!config.reference.empty()) {
    manifest.inputs.emplace_back(config.reference.string(), file_blob_sha1(config.reference));
  }
  const auto write_manifest = [&] { write_json(out / "manifest.json", manifest.to_json()); };

  std::vector<std::string>* current_outputs = nullptr;
  const auto emit_text = [&](const std::string& rel, const std::string& text) {
    write_text(out / rel, text);
    current_outputs->push_back(rel);
  };
  const auto emit_json = [&](const std::string& rel, const nlohmann::json& j) { emit_text(rel, j.dump(2) + "\n"); };

  const auto stage = [&](const std::string& name, const std::function<void()>& body) {
    StageRecord record{name, 0.0, {}};
    current_outputs = &record.outputs;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      manifest.stages.push_back(record);
      manifest.status = "failed in stage " + name + ": " + e.what();
      write_manifest();
      throw Error("stage " + name + ": " + e.what());
    }
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.stages.push_back(record);
  };

  ingest::FeatureMatrix features;
  ingest::LabelVector labels;
  ingest::SplitMasks masks;
  stage("ingest", [&] {
    const auto raw = ingest::load_raw(config.dataset, config.delimiter);
    const auto schema = ingest::Schema::load(config.schema);
    features = ingest::preprocess(raw, schema);
    labels = ingest::encode_labels(raw, schema.target_column());
    masks = ingest::stratified_split(labels, split_seed(config.seed));
    emit_text("features.csv", format_matrix_csv(features.values, features.feature_names));
    write_labels_csv(out / "labels.csv", labels);
    current_outputs->push_back("labels.csv");
    emit_json("masks.json", masks_to_json(masks));
    nlohmann::json counts;
    const auto c = labels.counts();
    for (std::size_t k = 0; k < c.size(); ++k) counts[labels.names[k]] = c[k];
    emit_json("preprocess.json", {{"rows", features.values.rows()},
                                  {"features", features.values.cols()},
                                  {"class_counts", counts},
                                  {"split", {{"train", ingest::SplitMasks::indices(masks.train).size()},
                                             {"val", ingest::SplitMasks::indices(masks.val).size()},
                                             {"test", ingest::SplitMasks::indices(masks.test).size()}}},
                                  {"warnings", features.warnings}});
  });

  reduce::Embedding embedding;
  stage("reduce", [&] {
    embedding = reduce::reduce(features.values, config.reduction, cluster::reduction_seed(config.seed));
    emit_text("embedding.csv", format_matrix_csv(embedding.values));
    emit_json("embedding.json", {{"method", reduce::to_string(embedding.method)},
                                 {"label", config.reduction.label()},
                                 {"params", embedding.params}});
  });

  graph::Graph g;
  if (config.strategy == GraphStrategy::kClusterComembership) {
    cluster::ClusterAssignment assignment;
    stage("cluster", [&] {
      assignment = cluster::run_clustering(embedding.values, config.clustering,
                                           cluster::clustering_seed(config.seed, 0));
      std::string emit_path = "assignment.csv";
      write_assignment_csv(out / emit_path, assignment);
      current_outputs->push_back(emit_path);
      nlohmann::json sil = nullptr;
      if (assignment.num_clusters >= 2) sil = cluster::silhouette(embedding.values, assignment).score;
      emit_json("clustering.json", {{"spec", config.clustering.to_json()},
                                    {"num_clusters", assignment.num_clusters},
                                    {"cluster_sizes", assignment.cluster_sizes()},
                                    {"noise", assignment.noise_count()},
                                    {"silhouette", sil}});
    });
    stage("graph", [&] {
      g = graph::build_cluster_graph(assignment, config.max_edges);
      emit_text("edges.txt", graph::format_edge_list(g));
      emit_json("graph_stats.json", graph::graph_stats(g).to_json());
    });
  } else {
    stage("graph", [&] {
      g = graph::build_knn_graph(embedding.values, config.knn_k, config.knn_mode);
      emit_text("edges.txt", graph::format_edge_list(g));
      emit_json("graph_stats.json", graph::graph_stats(g).to_json());
    });
  }

  const std::string graph_label = config.graph_label();
  for (const auto kind : config.models) {
    const std::string tag = gnn::to_string(kind);
    stage("train_" + tag, [&] {
      const auto op = gnn::make_operator(g, kind);
      auto search = gnn::random_search(kind, *op, features.values, labels, masks, config.search,
                                       config.trials, search_seed(config.seed, kind));
      const auto& best = search.trials[static_cast<std::size_t>(search.best_trial)];
      const auto predictions = nn::argmax_rows(search.best_model.predict_logits(*op, features.values));
      auto report = metrics::evaluate_masked(labels.labels, predictions, masks.test,
                                             static_cast<int>(labels.names.size()), labels.names);
      nlohmann::json search_json = search.to_json();
      search_json["operator"] = op->name();
      emit_json("search_" + tag + ".json", search_json);
      emit_text("history_" + tag + ".csv", best.history.to_csv());
      emit_json("checkpoint_" + tag + ".json", search.best_model.checkpoint());
      write_predictions_csv(out / ("predictions_" + tag + ".csv"), predictions);
      current_outputs->push_back("predictions_" + tag + ".csv");
      emit_json("metrics_" + tag + ".json", report.to_json());
      outcome.reports.emplace_back(model_display_name(kind, graph_label), std::move(report));
    });
  }

  if (config.baseline) {
    stage("baseline", [&] {
      auto result = baseline::cross_validate_search(features.values, labels, masks, config.forest,
                                                    config.forest_combos, config.forest_folds,
                                                    forest_seed(config.seed));
      nlohmann::json cv = result.cv.to_json();
      cv["best_params"] = result.best_params.to_json();
      cv["pool"] = "train+val";
      emit_json("baseline_cv.json", cv);
      emit_json("forest.json", result.model.to_json());
      write_predictions_csv(out / "predictions_rf.csv", result.predictions);
      current_outputs->push_back("predictions_rf.csv");
      emit_json("metrics_rf.json", result.test_report.to_json());
      outcome.reports.emplace_back("Random Forest (tabular)", std::move(result.test_report));
    });
  }

  stage("report", [&] {
    std::vector<metrics::ComparisonRow> reference;
    if (!config.reference.empty()) reference = metrics::load_reference_rows(config.reference);
    outcome.table = metrics::compare_report(outcome.reports, reference);
    emit_text("comparison.csv", outcome.table.to_csv());
    emit_text("comparison.txt", outcome.table.to_text());
    nlohmann::json reports = nlohmann::json::object();
    for (const auto& [name, r] : outcome.reports) reports[name] = r.to_json();
    emit_json("report.json", {{"models", reports}, {"table", outcome.table.to_json()}});
  });

  for (const auto& s : manifest.stages) {
    for (const auto& rel : s.outputs) manifest.outputs.emplace_back(rel, file_blob_sha1(out / rel));
  }
  manifest.status = "ok";
  write_manifest();
  return outcome;
}

}  // namespace stugraph::pipeline
