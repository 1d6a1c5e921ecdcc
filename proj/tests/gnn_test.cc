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
#include <cmath>
#include <vector>

#include "stugraph/gnn/model.hpp"
#include "stugraph/gnn/train.hpp"
#include "stugraph/nn/ops.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace stugraph::gnn {
namespace {

using testing::check_parameter_gradient;
using testing::dense_adjacency;
using testing::dense_forward;
using testing::dense_neighbor_mean;
using testing::dense_normalized;
using testing::random_graph;
using testing::random_matrix;
using testing::randomize_batchnorm;

ModelConfig config_for(ModelKind kind, Index input_dim, Index hidden = 6) {
  ModelConfig c;
  c.kind = kind;
  c.input_dim = input_dim;
  c.hidden = hidden;
  c.dropout = 0.0;
  return c;
}

TEST(NormalizedAdjacency, IsolatedNodeIsOne) {
  const auto a = normalize_adjacency(graph::Graph::from_edges(3, {{0, 1}}));
  EXPECT_EQ(a.coeff(2, 2), 1.0);
}

TEST(NormalizedAdjacency, SingleEdgeClosedForm) {
  const MatrixXd a = MatrixXd(normalize_adjacency(graph::Graph::from_edges(2, {{0, 1}})));
  EXPECT_TRUE((a.array() == 0.5).all()) << a;
}

TEST(NormalizedAdjacency, MatchesDenseFormulaAndIsSymmetric) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(50, 0.1, rng);
    const SparseMatrixXd a = normalize_adjacency(g);
    const MatrixXd dense = MatrixXd(a);
    EXPECT_LE((dense - dense_normalized(g)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(dense == dense.transpose());
    for (int k = 0; k < a.outerSize(); ++k) {
      Index prev = -1;
      for (SparseMatrixXd::InnerIterator it(a, k); it; ++it) {
        EXPECT_GT(it.value(), 0.0);
        EXPECT_GT(it.col(), prev);
        prev = it.col();
      }
    }
  }
}

TEST(Model, IdentityComposition) {
  Rng rng(2);
  const MatrixXd x = random_matrix(5, 4, rng);
  ModelConfig c = config_for(ModelKind::kGcn, 4, 4);
  c.arch = {.layers = 1, .batchnorm = false, .activation = false, .head = false};
  GnnModel model(c, 1);
  model.layers()[0].weight.value = MatrixXd::Identity(4, 4);
  const auto op = make_operator(graph::Graph::from_edges(5, {}), ModelKind::kGcn);
  EXPECT_TRUE(model.predict_logits(*op, x) == x);
}

TEST(Model, OutputShapeAndLayerWidths) {
  Rng rng(3);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    GnnModel model(config_for(kind, 7, 9), 4);
    ASSERT_EQ(model.layers().size(), 3u);
    EXPECT_EQ(model.layers()[0].weight.value.rows(), kind == ModelKind::kSage ? 14 : 7);
    EXPECT_EQ(model.layers()[1].weight.value.rows(), kind == ModelKind::kSage ? 18 : 9);
    const auto g = random_graph(12, 0.2, rng);
    const auto op = make_operator(g, kind);
    const MatrixXd out = model.predict_logits(*op, random_matrix(12, 7, rng));
    EXPECT_EQ(out.rows(), 12);
    EXPECT_EQ(out.cols(), 3);
  }
}

TEST(Model, FeatureWidthMismatchIsAnError) {
  Rng rng(4);
  GnnModel model(config_for(ModelKind::kGcn, 3), 1);
  const auto op = make_operator(random_graph(5, 0.3, rng), ModelKind::kGcn);
  EXPECT_THROW(model.predict_logits(*op, random_matrix(5, 4, rng)), Error);
}

TEST(Model, SparseForwardMatchesDenseOracle) {
  Rng rng(5);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = random_graph(20, 0.15, rng);
      const MatrixXd x = random_matrix(20, 5, rng);
      GnnModel model(config_for(kind, 5), rng());
      randomize_batchnorm(model, rng);
      const auto op = make_operator(g, kind, false);
      EXPECT_LE((model.predict_logits(*op, x) - dense_forward(model, g, x)).cwiseAbs().maxCoeff(), 1e-10)
          << to_string(kind);
    }
  }
}

TEST(Model, CliqueOperatorMatchesSparseOperator) {
  Rng rng(6);
  cluster::ClusterAssignment a{{}, 3};
  for (int i = 0; i < 30; ++i) a.labels.push_back(static_cast<int>(uniform_index(rng, 4)) - 1);
  const auto g = graph::build_cluster_graph(a);
  const MatrixXd x = random_matrix(30, 4, rng);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    const auto fast = make_operator(g, kind, true);
    const auto slow = make_operator(g, kind, false);
    EXPECT_NE(fast->name(), slow->name());
    EXPECT_LE((fast->to_dense() - slow->to_dense()).cwiseAbs().maxCoeff(), 1e-12);
    GnnModel model(config_for(kind, 4), 9);
    randomize_batchnorm(model, rng);
    EXPECT_LE((model.predict_logits(*fast, x) - model.predict_logits(*slow, x)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((model.predict_logits(*fast, x) - dense_forward(model, g, x)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Sage, IsolatedNodeAggregatesToZero) {
  Rng rng(7);
  const auto g = graph::Graph::from_edges(4, {{1, 2}, {2, 3}});
  const MatrixXd h = random_matrix(4, 3, rng);
  for (const bool clique : {true, false}) {
    const auto op = make_operator(g, ModelKind::kSage, clique);
    EXPECT_TRUE(op->apply(h).row(0).isZero(0.0));
  }
  cluster::ClusterAssignment a{{-1, 0, 0, 0}, 1};
  const auto op = make_operator(graph::build_cluster_graph(a), ModelKind::kSage, true);
  EXPECT_TRUE(op->apply(h).row(0).isZero(0.0));
}

TEST(Model, TwoNodeSymmetry) {
  Rng rng(8);
  const auto g = graph::Graph::from_edges(2, {{0, 1}});
  MatrixXd x(2, 3);
  x.row(0) = random_matrix(1, 3, rng);
  x.row(1) = x.row(0);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    GnnModel model(config_for(kind, 3), 3);
    randomize_batchnorm(model, rng);
    const MatrixXd out = model.predict_logits(*make_operator(g, kind), x);
    EXPECT_TRUE(out.row(0) == out.row(1));
  }
}

TEST(Model, PermutationEquivariance) {
  Rng rng(9);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    const auto g = random_graph(20, 0.2, rng);
    const MatrixXd x = random_matrix(20, 4, rng);
    std::vector<Index> perm(20);
    std::iota(perm.begin(), perm.end(), Index{0});
    shuffle_in_place(perm, rng);
    // Node i of the permuted graph is node perm[i] of the original.
    std::vector<Index> inverse(20);
    for (Index i = 0; i < 20; ++i) inverse[perm[i]] = i;
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& [u, v] : g.edge_list()) edges.emplace_back(inverse[u], inverse[v]);
    const auto gp = graph::Graph::from_edges(20, edges);
    MatrixXd xp(20, 4);
    for (Index i = 0; i < 20; ++i) xp.row(i) = x.row(perm[i]);

    GnnModel model(config_for(kind, 4), 5);
    randomize_batchnorm(model, rng);
    const MatrixXd out = model.predict_logits(*make_operator(g, kind), x);
    const MatrixXd outp = model.predict_logits(*make_operator(gp, kind), xp);
    for (Index i = 0; i < 20; ++i) {
      EXPECT_LE((outp.row(i) - out.row(perm[i])).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Model, FullModelFiniteDifferenceSpotChecks) {
  Rng rng(10);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = random_graph(8, 0.3, rng);
      const MatrixXd x = random_matrix(8, 3, rng);
      std::vector<int> labels;
      std::vector<bool> mask;
      for (int i = 0; i < 8; ++i) {
        labels.push_back(static_cast<int>(uniform_index(rng, 3)));
        mask.push_back(i < 6);
      }
      ModelConfig c = config_for(kind, 3, 4);
      c.dropout = 0.3;
      GnnModel model(c, rng());
      const auto op = make_operator(g, kind);
      const std::uint64_t dropout_seed = rng();
      const auto loss = [&](nn::Tape& t) {
        Rng d(dropout_seed);
        return nn::cross_entropy(model.forward(t, *op, t.constant(x), nn::Mode::kTrain, d), labels, mask);
      };
      auto params = model.parameters();
      for (int s = 0; s < 5; ++s) {
        nn::Parameter& p = *params[uniform_index(rng, params.size())];
        const Index i = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(p.value.rows())));
        const Index j = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(p.value.cols())));
        const auto r = check_parameter_gradient(p, loss, 1e-5, {{i, j}});
        // Entries with a vanishing gradient are compared absolutely.
        EXPECT_LT(r.scale > 1e-8 ? r.relative_error() : r.max_abs_error, 1e-3)
            << to_string(kind) << " " << p.name << "(" << i << "," << j << ")";
      }
    }
  }
}

ingest::SplitMasks masks_every(Index n, int val_every, int test_every) {
  ingest::SplitMasks m;
  for (Index i = 0; i < n; ++i) {
    const bool val = i % val_every == 1;
    const bool test = !val && i % test_every == 2;
    m.val.push_back(val);
    m.test.push_back(test);
    m.train.push_back(!val && !test);
  }
  return m;
}

TEST(EarlyStopping, StopsPatienceEpochsAfterBest) {
  EarlyStopping s(15);
  int epoch = 0;
  for (; epoch < 10; ++epoch) s.update(epoch + 1, 1.0 - 0.01 * epoch);
  while (!s.should_stop()) s.update(++epoch, 5.0);
  EXPECT_EQ(s.best_epoch(), 10);
  EXPECT_EQ(epoch, 25);
}

TEST(Train, InjectedPlateauStopsFifteenEpochsAfterBest) {
  Rng rng(11);
  const auto g = random_graph(30, 0.1, rng);
  const MatrixXd x = random_matrix(30, 4, rng);
  ingest::LabelVector y;
  for (int i = 0; i < 30; ++i) y.labels.push_back(i % 3);
  const auto masks = masks_every(30, 4, 5);
  TrainConfig cfg;
  cfg.hidden = 16;
  cfg.dropout = 0.1;
  cfg.seed = 3;
  for (const int best : {1, 7, 40}) {
    const auto hook = [best](int epoch, double) { return epoch <= best ? 10.0 - epoch : 20.0; };
    const auto r = train(ModelKind::kSage, *make_operator(g, ModelKind::kSage), x, y, masks, cfg, {}, hook);
    EXPECT_EQ(r.history.best_epoch, best);
    EXPECT_EQ(r.history.stop_reason, "early_stop");
    EXPECT_EQ(static_cast<int>(r.history.epochs.size()), best + 15);
    EXPECT_EQ(r.history.epochs.back().epoch, best + 15);
  }
}

TEST(Train, NeverPastBestPlusPatience) {
  Rng rng(12);
  const auto g = random_graph(24, 0.15, rng);
  const MatrixXd x = random_matrix(24, 3, rng);
  ingest::LabelVector y;
  for (int i = 0; i < 24; ++i) y.labels.push_back(i % 3);
  const auto masks = masks_every(24, 4, 5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> seq;
    for (int e = 0; e < 100; ++e) seq.push_back(uniform01(rng) + (e < 30 ? 1.0 - e / 30.0 : 0.0));
    TrainConfig cfg;
    cfg.hidden = 16;
    cfg.dropout = 0.1;
    cfg.seed = trial;
    const auto hook = [&](int epoch, double) { return seq[static_cast<std::size_t>(epoch - 1)]; };
    const auto r = train(ModelKind::kGcn, *make_operator(g, ModelKind::kGcn), x, y, masks, cfg, {}, hook);
    const auto& h = r.history;
    EXPECT_LE(static_cast<int>(h.epochs.size()), cfg.max_epochs);
    EXPECT_LE(h.epochs.back().epoch, h.best_epoch + cfg.patience);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& e : h.epochs) lowest = std::min(lowest, e.val_loss);
    EXPECT_EQ(h.best_val_loss, lowest);
  }
}

TEST(Train, TwoCliquesBecomeSeparable) {
  Rng rng(13);
  std::vector<std::pair<Index, Index>> edges;
  for (Index c = 0; c < 2; ++c) {
    for (Index i = 0; i < 10; ++i) {
      for (Index j = i + 1; j < 10; ++j) edges.emplace_back(10 * c + i, 10 * c + j);
    }
  }
  const auto g = graph::Graph::from_edges(20, edges);
  MatrixXd x = random_matrix(20, 4, rng, 0.3);
  x.topRows(10).col(0).array() += 1.0;
  x.bottomRows(10).col(0).array() -= 1.0;
  ingest::LabelVector y;
  for (int i = 0; i < 20; ++i) y.labels.push_back(i < 10 ? 0 : 1);
  const auto masks = masks_every(20, 5, 7);
  for (const auto kind : {ModelKind::kGcn, ModelKind::kSage}) {
    TrainConfig cfg;
    cfg.hidden = 16;
    cfg.dropout = 0.1;
    cfg.seed = 1;
    auto r = train(kind, *make_operator(g, kind), x, y, masks, cfg);
    const auto pred = nn::argmax_rows(r.model.predict_logits(*make_operator(g, kind), x));
    int correct = 0, total = 0;
    for (int i = 0; i < 20; ++i) {
      if (!masks.train[i]) continue;
      ++total;
      correct += pred[i] == y.labels[i];
    }
    EXPECT_EQ(correct, total) << to_string(kind);
    EXPECT_LE(static_cast<int>(r.history.epochs.size()), 100);
  }
}

TEST(Train, SameConfigAndSeedGiveIdenticalHistory) {
  Rng rng(14);
  const auto g = random_graph(30, 0.1, rng);
  const MatrixXd x = random_matrix(30, 4, rng);
  ingest::LabelVector y;
  for (int i = 0; i < 30; ++i) y.labels.push_back(static_cast<int>(uniform_index(rng, 3)));
  const auto masks = masks_every(30, 4, 5);
  TrainConfig cfg;
  cfg.hidden = 16;
  cfg.max_epochs = 30;
  cfg.seed = 8;
  const auto op = make_operator(g, ModelKind::kSage);
  const auto a = train(ModelKind::kSage, *op, x, y, masks, cfg);
  const auto b = train(ModelKind::kSage, *op, x, y, masks, cfg);
  EXPECT_EQ(a.history.to_csv(), b.history.to_csv());
}

TEST(Train, OutOfRangeConfigIsRejected) {
  TrainConfig cfg;
  cfg.hidden = 8;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.hidden = 64;
  cfg.lr = 0.5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.lr = 0.01;
  cfg.dropout = 0.6;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Train, HistoryCsvHeader) {
  TrainHistory h;
  h.epochs.push_back({1, 0.5, 0.25, 1.0});
  EXPECT_EQ(h.to_csv().substr(0, 33), "epoch,train_loss,val_loss,val_acc");
}

TEST(Search, SampledConfigsStayInRange) {
  const SearchSpace space;
  const auto configs = sample_configs(space, 2000, 17);
  double lo_lr = 1, hi_lr = 0;
  for (const auto& c : configs) {
    EXPECT_GE(c.lr, 1e-4);
    EXPECT_LE(c.lr, 1e-1);
    EXPECT_GE(c.hidden, 16);
    EXPECT_LE(c.hidden, 256);
    EXPECT_GE(c.dropout, 0.1);
    EXPECT_LE(c.dropout, 0.5);
    EXPECT_NO_THROW(c.validate());
    lo_lr = std::min(lo_lr, c.lr);
    hi_lr = std::max(hi_lr, c.lr);
  }
  // Log-uniform over three decades puts a third of the draws below 1e-3.
  int below_1e3 = 0;
  for (const auto& c : configs) below_1e3 += c.lr < 1e-3;
  EXPECT_NEAR(below_1e3 / 2000.0, 1.0 / 3.0, 0.05);
}

TEST(Search, SameSeedSameSequence) {
  const auto a = sample_configs({}, 10, 5);
  const auto b = sample_configs({}, 10, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].to_json(), b[i].to_json());
  EXPECT_NE(sample_configs({}, 10, 6)[0].to_json(), a[0].to_json());
}

TEST(Search, SingleTrialIsBest) {
  Rng rng(15);
  const auto g = random_graph(24, 0.15, rng);
  const MatrixXd x = random_matrix(24, 3, rng);
  ingest::LabelVector y;
  for (int i = 0; i < 24; ++i) y.labels.push_back(i % 3);
  const auto masks = masks_every(24, 4, 5);
  SearchSpace space;
  space.max_epochs = 10;
  const auto op = make_operator(g, ModelKind::kGcn);
  const auto r = random_search(ModelKind::kGcn, *op, x, y, masks, space, 1, 3);
  ASSERT_EQ(r.trials.size(), 1u);
  EXPECT_EQ(r.best_trial, 0);
  const auto r3 = random_search(ModelKind::kGcn, *op, x, y, masks, space, 3, 3);
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& t : r3.trials) lowest = std::min(lowest, t.history.best_val_loss);
  EXPECT_EQ(r3.trials[r3.best_trial].history.best_val_loss, lowest);
  EXPECT_EQ(r3.to_json().dump(), random_search(ModelKind::kGcn, *op, x, y, masks, space, 3, 3).to_json().dump());
}

}  // namespace
}  // namespace stugraph::gnn
