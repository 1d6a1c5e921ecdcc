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

// Command-line front end: one subcommand per pipeline stage plus `run`.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "stugraph/baseline/search.hpp"
#include "stugraph/cluster/silhouette.hpp"
#include "stugraph/cluster/sweep.hpp"
#include "stugraph/gnn/train.hpp"
#include "stugraph/graph/graph.hpp"
#include "stugraph/ingest/ingest.hpp"
#include "stugraph/metrics/metrics.hpp"
#include "stugraph/pipeline/io.hpp"
#include "stugraph/pipeline/pipeline.hpp"
#include "stugraph/pipeline/synthetic.hpp"
#include "stugraph/reduce/reduction.hpp"

namespace sg = stugraph;
namespace fs = std::filesystem;
using sg::pipeline::read_json;
using sg::pipeline::write_json;
using sg::pipeline::write_text;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 42;
  std::string out = ".";
};

sg::graph::Graph load_graph_for(const std::string& edges, sg::Index n) {
  auto g = sg::graph::read_edge_list(edges);
  if (g.num_nodes() != n) {
    throw sg::Error(edges + ": graph has " + std::to_string(g.num_nodes()) + " nodes but features have " +
                    std::to_string(n) + " rows");
  }
  return g;
}

void print_table(const sg::metrics::ComparisonTable& t) { std::cout << t.to_text(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Student-outcome graph construction, GNN training and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "CSV -> feature matrix, labels and split masks");
  std::string data_path, schema_path = "data/schema.json", delimiter = ";";
  pre->add_option("--data", data_path, "Raw ';'-separated dataset")->required();
  pre->add_option("--schema", schema_path, "Column schema")->capture_default_str();
  pre->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();

  // reduce
  auto* red = app.add_subcommand("reduce", "Feature matrix -> low-dimensional embedding");
  std::string features_path, method = "umap";
  sg::Index components = 10, intermediate = 50;
  sg::reduce::UmapParams umap;
  red->add_option("--features", features_path, "features.csv")->required();
  red->add_option("--method", method, "pca | umap | pca+umap")->capture_default_str();
  red->add_option("--components", components, "Output width")->capture_default_str();
  red->add_option("--intermediate", intermediate, "PCA width before UMAP")->capture_default_str();
  red->add_option("--n-neighbors", umap.n_neighbors, "UMAP neighbors")->capture_default_str();
  red->add_option("--min-dist", umap.min_dist, "UMAP min_dist")->capture_default_str();
  red->add_option("--epochs", umap.n_epochs, "UMAP epochs")->capture_default_str();

  // cluster
  auto* clu = app.add_subcommand("cluster", "Embedding -> cluster assignment");
  std::string embedding_path, cluster_method = "hdbscan";
  int k = 2;
  sg::cluster::HdbscanParams hdb;
  clu->add_option("--embedding", embedding_path, "embedding.csv")->required();
  clu->add_option("--method", cluster_method, "hdbscan | kmeans")->capture_default_str();
  clu->add_option("--k", k, "KMeans clusters")->capture_default_str();
  clu->add_option("--min-cluster-size", hdb.min_cluster_size, "HDBSCAN min_cluster_size")->capture_default_str();
  clu->add_option("--min-samples", hdb.min_samples, "HDBSCAN min_samples")->capture_default_str();

  // sweep
  auto* swp = app.add_subcommand("sweep", "Rank reduction x clustering combinations by silhouette");
  swp->add_option("--features", features_path, "features.csv")->required();

  // graph
  auto* gra = app.add_subcommand("graph", "Build the node graph");
  std::string strategy = "cluster-comembership", assignment_path, knn_mode = "mutual";
  sg::Index knn_k = 5, max_edges = 50'000'000;
  gra->add_option("--strategy", strategy, "cluster-comembership | knn-proximity")->capture_default_str();
  gra->add_option("--assignment", assignment_path, "assignment.csv (co-membership)");
  gra->add_option("--embedding", embedding_path, "embedding.csv (k-NN)");
  gra->add_option("--k", knn_k, "Neighbors for k-NN")->capture_default_str();
  gra->add_option("--mode", knn_mode, "mutual | union")->capture_default_str();
  gra->add_option("--max-edges", max_edges, "Edge cap for co-membership graphs")->capture_default_str();

  // train
  auto* trn = app.add_subcommand("train", "Random search and training of a GNN");
  std::string labels_path, masks_path, edges_path, model = "sage";
  int trials = 20;
  sg::gnn::SearchSpace space;
  trn->add_option("--features", features_path, "features.csv")->required();
  trn->add_option("--labels", labels_path, "labels.csv")->required();
  trn->add_option("--masks", masks_path, "masks.json")->required();
  trn->add_option("--edges", edges_path, "edges.txt")->required();
  trn->add_option("--model", model, "gcn | sage")->capture_default_str();
  trn->add_option("--trials", trials, "Random-search trials")->capture_default_str();
  trn->add_option("--max-epochs", space.max_epochs, "Epoch limit")->capture_default_str();
  trn->add_option("--patience", space.patience, "Early-stopping patience")->capture_default_str();

  // evaluate
  auto* evl = app.add_subcommand("evaluate", "Metrics for a prediction file");
  std::string predictions_path, split = "test";
  evl->add_option("--labels", labels_path, "labels.csv")->required();
  evl->add_option("--predictions", predictions_path, "predictions csv")->required();
  evl->add_option("--masks", masks_path, "masks.json (optional)");
  evl->add_option("--split", split, "train | val | test | all")->capture_default_str();

  // baseline
  auto* bas = app.add_subcommand("baseline", "Random Forest with stratified cross-validated search");
  int combos = 5, folds = 5;
  bas->add_option("--features", features_path, "features.csv")->required();
  bas->add_option("--labels", labels_path, "labels.csv")->required();
  bas->add_option("--masks", masks_path, "masks.json")->required();
  bas->add_option("--combos", combos, "Sampled settings")->capture_default_str();
  bas->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();

  // report
  auto* rep = app.add_subcommand("report", "Comparison table from metrics files");
  std::vector<std::string> metric_files;
  std::string reference_path;
  rep->add_option("--metrics", metric_files, "NAME=metrics.json (repeatable)");
  rep->add_option("--reference", reference_path, "Reference results JSON");

  // run
  auto* run = app.add_subcommand("run", "End-to-end pipeline from --config");

  // synth
  auto* syn = app.add_subcommand("synth", "Write a synthetic dataset with the UCI layout");
  sg::pipeline::SyntheticOptions synth;
  std::string synth_out = "synthetic.csv";
  syn->add_option("--schema", schema_path, "Column schema")->capture_default_str();
  syn->add_option("--rows", synth.rows, "Rows")->capture_default_str();
  syn->add_option("--file", synth_out, "Output CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  const bool seed_given = app.count("--seed") > 0;
  const bool out_given = app.count("--out") > 0;
  const fs::path out(g.out);

  CLI::App* active = app.get_subcommands().front();
  const std::string stage = active->get_name();
  try {
    if (active == pre) {
      const auto raw = sg::ingest::load_raw(data_path, delimiter.at(0));
      const auto schema = sg::ingest::Schema::load(schema_path);
      const auto features = sg::ingest::preprocess(raw, schema);
      const auto labels = sg::ingest::encode_labels(raw, schema.target_column());
      const auto masks = sg::ingest::stratified_split(labels, sg::pipeline::split_seed(g.seed));
      sg::pipeline::write_matrix_csv(out / "features.csv", features.values, features.feature_names);
      sg::pipeline::write_labels_csv(out / "labels.csv", labels);
      sg::pipeline::write_masks_json(out / "masks.json", masks);
      const auto counts = labels.counts();
      nlohmann::json c;
      for (std::size_t i = 0; i < counts.size(); ++i) c[labels.names[i]] = counts[i];
      write_json(out / "preprocess.json", {{"rows", features.values.rows()},
                                           {"features", features.values.cols()},
                                           {"class_counts", c},
                                           {"missing_cells", sg::ingest::audit_missing(raw)},
                                           {"warnings", features.warnings}});
      std::cout << "features " << features.values.rows() << " x " << features.values.cols() << "\n";
    } else if (active == red) {
      sg::reduce::ReductionSpec spec;
      spec.method = sg::reduce::parse_reduction_method(method);
      spec.components = components;
      spec.intermediate = intermediate;
      spec.umap = umap;
      const auto x = sg::pipeline::read_matrix_csv(features_path);
      const auto e = sg::reduce::reduce(x, spec, sg::cluster::reduction_seed(g.seed));
      sg::pipeline::write_matrix_csv(out / "embedding.csv", e.values);
      write_json(out / "embedding.json", {{"method", sg::reduce::to_string(e.method)},
                                          {"label", spec.label()},
                                          {"params", e.params}});
      std::cout << spec.label() << " -> " << e.values.rows() << " x " << e.values.cols() << "\n";
    } else if (active == clu) {
      sg::cluster::ClusteringSpec spec = sg::cluster::ClusteringSpec::from_json({{"method", cluster_method}});
      spec.k = k;
      spec.hdbscan = hdb;
      const auto x = sg::pipeline::read_matrix_csv(embedding_path);
      const auto a = sg::cluster::run_clustering(x, spec, sg::cluster::clustering_seed(g.seed, 0));
      sg::pipeline::write_assignment_csv(out / "assignment.csv", a);
      nlohmann::json sil = nullptr;
      if (a.num_clusters >= 2) sil = sg::cluster::silhouette(x, a).score;
      write_json(out / "clustering.json", {{"spec", spec.to_json()},
                                           {"num_clusters", a.num_clusters},
                                           {"cluster_sizes", a.cluster_sizes()},
                                           {"noise", a.noise_count()},
                                           {"silhouette", sil}});
      std::cout << a.num_clusters << " clusters, " << a.noise_count() << " noise points\n";
    } else if (active == swp) {
      const auto x = sg::pipeline::read_matrix_csv(features_path);
      const auto ranked = sg::cluster::sweep_configurations(x, sg::cluster::default_grid(), g.seed);
      write_json(out / "sweep.json", sg::cluster::to_json(ranked));
      for (const auto& e : ranked) {
        std::cout << e.spec.reduction.label() << " + " << e.spec.clustering.label() << "  " << e.silhouette << "\n";
      }
    } else if (active == gra) {
      sg::graph::Graph graph;
      if (sg::pipeline::parse_strategy(strategy) == sg::pipeline::GraphStrategy::kClusterComembership) {
        if (assignment_path.empty()) throw sg::Error("--assignment is required for cluster-comembership");
        graph = sg::graph::build_cluster_graph(sg::pipeline::read_assignment_csv(assignment_path), max_edges);
      } else {
        if (embedding_path.empty()) throw sg::Error("--embedding is required for knn-proximity");
        graph = sg::graph::build_knn_graph(sg::pipeline::read_matrix_csv(embedding_path), knn_k,
                                           sg::graph::parse_knn_mode(knn_mode));
      }
      sg::graph::write_edge_list(graph, out / "edges.txt");
      const auto stats = sg::graph::graph_stats(graph).to_json();
      write_json(out / "graph_stats.json", stats);
      std::cout << stats.dump() << "\n";
    } else if (active == trn) {
      const auto x = sg::pipeline::read_matrix_csv(features_path);
      const auto labels = sg::pipeline::read_labels_csv(labels_path);
      const auto masks = sg::pipeline::read_masks_json(masks_path);
      const auto graph = load_graph_for(edges_path, x.rows());
      const auto kind = sg::gnn::parse_model_kind(model);
      const auto op = sg::gnn::make_operator(graph, kind);
      auto search = sg::gnn::random_search(kind, *op, x, labels, masks, space, trials,
                                           sg::pipeline::search_seed(g.seed, kind));
      const auto tag = sg::gnn::to_string(kind);
      const auto& best = search.trials[static_cast<std::size_t>(search.best_trial)];
      const auto pred = sg::nn::argmax_rows(search.best_model.predict_logits(*op, x));
      const auto report = sg::metrics::evaluate_masked(labels.labels, pred, masks.test, 3, labels.names);
      write_json(out / ("search_" + tag + ".json"), search.to_json());
      write_text(out / ("history_" + tag + ".csv"), best.history.to_csv());
      write_json(out / ("checkpoint_" + tag + ".json"), search.best_model.checkpoint());
      sg::pipeline::write_predictions_csv(out / ("predictions_" + tag + ".csv"), pred);
      write_json(out / ("metrics_" + tag + ".json"), report.to_json());
      std::cout << tag << " test accuracy " << report.accuracy << ", macro F1 " << report.macro_f1 << "\n";
    } else if (active == evl) {
      const auto labels = sg::pipeline::read_labels_csv(labels_path);
      const auto pred = sg::pipeline::read_predictions_csv(predictions_path);
      std::vector<bool> mask(labels.labels.size(), true);
      if (split != "all") {
        if (masks_path.empty()) throw sg::Error("--masks is required unless --split all");
        const auto masks = sg::pipeline::read_masks_json(masks_path);
        if (split == "train") mask = masks.train;
        else if (split == "val") mask = masks.val;
        else if (split == "test") mask = masks.test;
        else throw sg::Error("unknown split '" + split + "'");
      }
      const auto report = sg::metrics::evaluate_masked(labels.labels, pred, mask, 3, labels.names);
      write_json(out / "metrics.json", report.to_json());
      std::cout << "accuracy " << report.accuracy << ", macro F1 " << report.macro_f1 << "\n";
    } else if (active == bas) {
      const auto x = sg::pipeline::read_matrix_csv(features_path);
      const auto labels = sg::pipeline::read_labels_csv(labels_path);
      const auto masks = sg::pipeline::read_masks_json(masks_path);
      auto result = sg::baseline::cross_validate_search(x, labels, masks, {}, combos, folds,
                                                        sg::pipeline::forest_seed(g.seed));
      nlohmann::json cv = result.cv.to_json();
      cv["best_params"] = result.best_params.to_json();
      write_json(out / "baseline_cv.json", cv);
      write_json(out / "forest.json", result.model.to_json());
      sg::pipeline::write_predictions_csv(out / "predictions_rf.csv", result.predictions);
      write_json(out / "metrics_rf.json", result.test_report.to_json());
      std::cout << "random forest test accuracy " << result.test_report.accuracy << ", macro F1 "
                << result.test_report.macro_f1 << "\n";
    } else if (active == rep) {
      if (metric_files.empty()) throw sg::Error("no input reports given (use --metrics NAME=metrics.json)");
      std::vector<std::pair<std::string, sg::metrics::MetricsReport>> reports;
      for (const auto& spec : metric_files) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw sg::Error("--metrics expects NAME=path, got '" + spec + "'");
        const auto j = read_json(spec.substr(eq + 1));
        sg::metrics::MetricsReport r;
        try {
          r.accuracy = j.at("accuracy").get<double>();
          r.macro_precision = j.at("macro_precision").get<double>();
          r.macro_recall = j.at("macro_recall").get<double>();
          r.macro_f1 = j.at("macro_f1").get<double>();
        } catch (const nlohmann::json::exception&) {
          throw sg::Error(spec.substr(eq + 1) + ": malformed file, expected a metrics report");
        }
        reports.emplace_back(spec.substr(0, eq), r);
      }
      std::vector<sg::metrics::ComparisonRow> reference;
      if (!reference_path.empty()) reference = sg::metrics::load_reference_rows(reference_path);
      const auto table = sg::metrics::compare_report(reports, reference);
      write_text(out / "comparison.csv", table.to_csv());
      write_text(out / "comparison.txt", table.to_text());
      print_table(table);
    } else if (active == run) {
      if (g.config.empty()) throw sg::Error("--config is required");
      auto config = sg::pipeline::RunConfig::load(g.config);
      if (seed_given) config.seed = g.seed;
      if (out_given) config.output_dir = fs::absolute(out);
      const auto outcome = sg::pipeline::run_pipeline(config);
      print_table(outcome.table);
      std::cout << "artifacts in " << config.output_dir.string() << "\n";
    } else if (active == syn) {
      synth.seed = g.seed;
      const auto schema = sg::ingest::Schema::load(schema_path);
      write_text(synth_out, sg::pipeline::synthesize_dataset(schema, synth));
      std::cout << "wrote " << synth.rows << " synthetic rows to " << synth_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "stugraph " << stage << ": error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
