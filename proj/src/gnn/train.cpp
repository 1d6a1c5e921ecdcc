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

#include "stugraph/gnn/train.hpp"

#include <cmath>
#include <sstream>

#include "stugraph/nn/adam.hpp"
#include "stugraph/parallel.hpp"

namespace stugraph::gnn {
namespace {

std::vector<std::vector<double>> snapshot(const nn::NamedTensors& tensors) {
  std::vector<std::vector<double>> out;
  for (const auto& t : tensors) out.emplace_back(t.data, t.data + t.size());
  return out;
}

void restore(const nn::NamedTensors& tensors, const std::vector<std::vector<double>>& saved) {
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    std::copy(saved[i].begin(), saved[i].end(), tensors[i].data);
  }
}

std::string lr_string(double lr) {
  std::ostringstream s;
  s << lr;
  return s.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr >= 1e-4 && lr <= 1e-1)) throw Error("train: lr = " + lr_string(lr) + " outside [1e-4, 1e-1]");
  if (hidden < 16 || hidden > 256) throw Error("train: hidden = " + std::to_string(hidden) + " outside [16, 256]");
  if (!(dropout >= 0.1 && dropout <= 0.5)) throw Error("train: dropout = " + lr_string(dropout) + " outside [0.1, 0.5]");
  if (max_epochs < 1) throw Error("train: max_epochs must be positive");
  if (patience < 1) throw Error("train: patience must be positive");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"lr", lr}, {"hidden", hidden}, {"dropout", dropout},
          {"max_epochs", max_epochs}, {"patience", patience}, {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.lr = j.value("lr", c.lr);
  c.hidden = j.value("hidden", c.hidden);
  c.dropout = j.value("dropout", c.dropout);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.patience = j.value("patience", c.patience);
  c.seed = j.value("seed", c.seed);
  return c;
}

std::string TrainHistory::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss,val_acc\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ',' << e.val_acc << '\n';
  }
  return out.str();
}

nlohmann::json TrainHistory::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : epochs) {
    rows.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss},
                    {"val_loss", e.val_loss}, {"val_acc", e.val_acc}});
  }
  return {{"epochs", rows}, {"best_epoch", best_epoch},
          {"best_val_loss", best_val_loss}, {"stop_reason", stop_reason}};
}

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw Error("early stopping: patience must be positive");
}

bool EarlyStopping::update(int epoch, double val_loss) {
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

TrainResult train(ModelKind kind, const nn::LinearOperator& op, const MatrixXd& x,
                  const ingest::LabelVector& labels, const ingest::SplitMasks& masks,
                  const TrainConfig& config, const Architecture& arch, const ValLossHook& hook) {
  config.validate();
  const Index n = x.rows();
  if (labels.size() != n || static_cast<Index>(masks.train.size()) != n ||
      static_cast<Index>(masks.val.size()) != n || op.size() != n) {
    throw Error("train: features, labels, masks and graph disagree on the node count");
  }
  ModelConfig mc;
  mc.kind = kind;
  mc.input_dim = x.cols();
  mc.hidden = config.hidden;
  mc.dropout = config.dropout;
  mc.num_classes = static_cast<Index>(labels.names.size());
  mc.arch = arch;

  TrainResult result{GnnModel(mc, config.seed), {}};
  GnnModel& model = result.model;
  TrainHistory& history = result.history;
  nn::Adam optimizer(model.parameters(), {config.lr});
  Rng dropout_rng(derive_seed(config.seed, 0x44524f50));
  EarlyStopping stopper(config.patience);
  const nn::NamedTensors state = model.state();
  auto best = snapshot(state);
  const auto val_rows = ingest::SplitMasks::indices(masks.val);

  auto diverged = [&](int epoch, const std::string& what) {
    return Error("training diverged at epoch " + std::to_string(epoch) + " (lr = " +
                 lr_string(config.lr) + ", hidden = " + std::to_string(config.hidden) + "): " + what);
  };

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double train_loss = 0.0;
    try {
      nn::Tape tape;
      optimizer.zero_grad();
      const nn::Var logits = model.forward(tape, op, tape.constant(x), nn::Mode::kTrain, dropout_rng);
      const nn::Var loss = nn::cross_entropy(logits, labels.labels, masks.train);
      train_loss = loss.value()(0, 0);
      tape.backward(loss);
      optimizer.step();
    } catch (const Error& e) {
      throw diverged(epoch, e.what());
    }

    const MatrixXd logits = model.predict_logits(op, x);
    double val_loss = 0.0;
    {
      nn::Tape tape;
      val_loss = nn::cross_entropy(tape.constant(logits), labels.labels, masks.val).value()(0, 0);
    }
    const auto pred = nn::argmax_rows(logits);
    Index correct = 0;
    for (Index i : val_rows) {
      correct += pred[static_cast<std::size_t>(i)] == labels.labels[static_cast<std::size_t>(i)] ? 1 : 0;
    }
    const double val_acc = static_cast<double>(correct) / static_cast<double>(val_rows.size());
    if (hook) val_loss = hook(epoch, val_loss);
    if (!std::isfinite(val_loss)) throw diverged(epoch, "non-finite validation loss");

    history.epochs.push_back({epoch, train_loss, val_loss, val_acc});
    if (stopper.update(epoch, val_loss)) best = snapshot(state);
    if (stopper.should_stop()) {
      history.stop_reason = "early_stop";
      break;
    }
  }
  if (history.stop_reason.empty()) history.stop_reason = "max_epochs";
  history.best_epoch = stopper.best_epoch();
  history.best_val_loss = stopper.best_loss();
  restore(state, best);
  return result;
}

void SearchSpace::validate() const {
  if (!(lr_min > 0.0 && lr_min <= lr_max)) throw Error("search: need 0 < lr_min <= lr_max");
  if (hidden_min < 1 || hidden_min > hidden_max) throw Error("search: need 1 <= hidden_min <= hidden_max");
  if (!(dropout_min >= 0.0 && dropout_min <= dropout_max && dropout_max < 1.0)) {
    throw Error("search: need 0 <= dropout_min <= dropout_max < 1");
  }
}

nlohmann::json SearchSpace::to_json() const {
  return {{"lr", {lr_min, lr_max}},
          {"hidden", {hidden_min, hidden_max}},
          {"dropout", {dropout_min, dropout_max}},
          {"max_epochs", max_epochs},
          {"patience", patience}};
}

SearchSpace SearchSpace::from_json(const nlohmann::json& j) {
  SearchSpace s;
  if (j.contains("lr")) {
    s.lr_min = j.at("lr").at(0).get<double>();
    s.lr_max = j.at("lr").at(1).get<double>();
  }
  if (j.contains("hidden")) {
    s.hidden_min = j.at("hidden").at(0).get<Index>();
    s.hidden_max = j.at("hidden").at(1).get<Index>();
  }
  if (j.contains("dropout")) {
    s.dropout_min = j.at("dropout").at(0).get<double>();
    s.dropout_max = j.at("dropout").at(1).get<double>();
  }
  s.max_epochs = j.value("max_epochs", s.max_epochs);
  s.patience = j.value("patience", s.patience);
  s.validate();
  return s;
}

std::vector<TrainConfig> sample_configs(const SearchSpace& space, int n_trials, std::uint64_t seed) {
  space.validate();
  if (n_trials < 1) throw Error("random search: n_trials must be at least 1");
  Rng rng(derive_seed(seed, 0x53454152));
  const double log_lo = std::log(space.lr_min);
  const double log_hi = std::log(space.lr_max);
  std::vector<TrainConfig> out;
  for (int i = 0; i < n_trials; ++i) {
    TrainConfig c;
    c.lr = std::clamp(std::exp(log_lo + (log_hi - log_lo) * uniform01(rng)), space.lr_min, space.lr_max);
    c.hidden = space.hidden_min +
               static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(space.hidden_max - space.hidden_min + 1)));
    c.dropout = space.dropout_min + (space.dropout_max - space.dropout_min) * uniform01(rng);
    c.max_epochs = space.max_epochs;
    c.patience = space.patience;
    c.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    out.push_back(c);
  }
  return out;
}

nlohmann::json SearchResult::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : trials) {
    rows.push_back({{"trial", t.index},
                    {"config", t.config.to_json()},
                    {"best_epoch", t.history.best_epoch},
                    {"best_val_loss", t.history.best_val_loss},
                    {"epochs_run", t.history.epochs.size()},
                    {"stop_reason", t.history.stop_reason}});
  }
  return {{"best_trial", best_trial}, {"trials", rows}};
}

SearchResult random_search(ModelKind kind, const nn::LinearOperator& op, const MatrixXd& x,
                           const ingest::LabelVector& labels, const ingest::SplitMasks& masks,
                           const SearchSpace& space, int n_trials, std::uint64_t seed) {
  const auto configs = sample_configs(space, n_trials, seed);
  std::vector<TrainResult> results(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) {
    results[i] = train(kind, op, x, labels, masks, configs[i]);
  });
  SearchResult out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out.trials.push_back({static_cast<int>(i), configs[i], results[i].history});
    if (results[i].history.best_val_loss <
        results[static_cast<std::size_t>(out.best_trial)].history.best_val_loss) {
      out.best_trial = static_cast<int>(i);
    }
  }
  out.best_model = std::move(results[static_cast<std::size_t>(out.best_trial)].model);
  return out;
}

}  // namespace stugraph::gnn
