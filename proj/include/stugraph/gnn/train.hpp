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

#ifndef STUGRAPH_GNN_TRAIN_HPP_
#define STUGRAPH_GNN_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/gnn/model.hpp"
#include "stugraph/ingest/ingest.hpp"

namespace stugraph::gnn {

struct TrainConfig {
  double lr = 0.01;
  Index hidden = 64;
  double dropout = 0.5;
  int max_epochs = 100;
  int patience = 15;
  std::uint64_t seed = 0;

  /// Throws unless lr, hidden and dropout lie in the searchable ranges.
  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::string stop_reason;

  /// Columns: epoch,train_loss,val_loss,val_acc.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Tracks the best validation loss (strict improvement) and signals a stop
/// once `patience` consecutive epochs pass without improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);
  /// Returns true when `val_loss` improves on the best so far.
  bool update(int epoch, double val_loss);
  bool should_stop() const { return since_best_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  int since_best_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

/// Replaces the computed validation loss of an epoch; for tests.
using ValLossHook = std::function<double(int epoch, double computed)>;

struct TrainResult {
  GnnModel model;
  TrainHistory history;
};

/// Full-batch transductive training with Adam and early stopping. The
/// returned model holds the best-validation-loss weights.
TrainResult train(ModelKind kind, const nn::LinearOperator& op, const MatrixXd& x,
                  const ingest::LabelVector& labels, const ingest::SplitMasks& masks,
                  const TrainConfig& config, const Architecture& arch = {},
                  const ValLossHook& hook = {});

struct SearchSpace {
  double lr_min = 1e-4;
  double lr_max = 1e-1;
  Index hidden_min = 16;
  Index hidden_max = 256;
  double dropout_min = 0.1;
  double dropout_max = 0.5;
  int max_epochs = 100;
  int patience = 15;

  void validate() const;
  nlohmann::json to_json() const;
  static SearchSpace from_json(const nlohmann::json& j);
};

/// Log-uniform lr, uniform integer hidden, uniform dropout. Trial i uses
/// seed derive_seed(seed, i).
std::vector<TrainConfig> sample_configs(const SearchSpace& space, int n_trials, std::uint64_t seed);

struct Trial {
  int index = 0;
  TrainConfig config;
  TrainHistory history;
};

struct SearchResult {
  std::vector<Trial> trials;
  int best_trial = 0;
  GnnModel best_model;

  nlohmann::json to_json() const;
};

/// Trains every sampled configuration (in parallel) and keeps the one with
/// the lowest best validation loss; ties go to the earlier trial.
SearchResult random_search(ModelKind kind, const nn::LinearOperator& op, const MatrixXd& x,
                           const ingest::LabelVector& labels, const ingest::SplitMasks& masks,
                           const SearchSpace& space, int n_trials, std::uint64_t seed);

}  // namespace stugraph::gnn

#endif  // STUGRAPH_GNN_TRAIN_HPP_
