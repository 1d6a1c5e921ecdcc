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

#include "stugraph/gnn/model.hpp"

#include <cmath>

namespace stugraph::gnn {
namespace {

MatrixXd glorot_uniform(Index fan_in, Index fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  MatrixXd w(fan_in, fan_out);
  for (Index i = 0; i < fan_in; ++i) {
    for (Index j = 0; j < fan_out; ++j) w(i, j) = (2.0 * uniform01(rng) - 1.0) * limit;
  }
  return w;
}

}  // namespace

SparseMatrixXd normalize_adjacency(const graph::Graph& graph) {
  const Index n = graph.num_nodes();
  auto deg = [&](Index v) { return static_cast<double>(graph.degree(v) + 1); };
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * graph.num_edges() + n));
  for (Index v = 0; v < n; ++v) {
    triplets.emplace_back(v, v, 1.0 / deg(v));
    const auto [b, e] = graph.neighbors(v);
    for (const Index* p = b; p != e; ++p) {
      // The product under one root keeps the coefficient symmetric and exact
      // for equal degrees.
      triplets.emplace_back(v, *p, 1.0 / std::sqrt(deg(v) * deg(*p)));
    }
  }
  SparseMatrixXd a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

SparseMatrixXd neighbor_mean_matrix(const graph::Graph& graph) {
  const Index n = graph.num_nodes();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * graph.num_edges()));
  for (Index v = 0; v < n; ++v) {
    const Index d = graph.degree(v);
    const auto [b, e] = graph.neighbors(v);
    for (const Index* p = b; p != e; ++p) triplets.emplace_back(v, *p, 1.0 / static_cast<double>(d));
  }
  SparseMatrixXd a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "gcn") return ModelKind::kGcn;
  if (name == "sage" || name == "graphsage") return ModelKind::kSage;
  throw Error("unknown model '" + name + "' (expected gcn or sage)");
}

std::string to_string(ModelKind kind) { return kind == ModelKind::kGcn ? "gcn" : "sage"; }

std::unique_ptr<nn::LinearOperator> make_operator(const graph::Graph& graph, ModelKind kind,
                                                  bool allow_clique_form) {
  if (allow_clique_form && graph.num_nodes() > 0) {
    auto groups = graph::clique_partition(graph);
    if (!groups.empty()) {
      return std::make_unique<nn::CliqueMeanOperator>(
          std::move(groups), kind == ModelKind::kGcn ? nn::CliqueMeanOperator::Kind::kIncludeSelf
                                                     : nn::CliqueMeanOperator::Kind::kExcludeSelf);
    }
  }
  if (kind == ModelKind::kGcn) {
    return std::make_unique<nn::SparseOperator>(normalize_adjacency(graph), true);
  }
  return std::make_unique<nn::SparseOperator>(neighbor_mean_matrix(graph), false);
}

nlohmann::json ModelConfig::to_json() const {
  return {{"model", gnn::to_string(kind)},
          {"input_dim", input_dim},
          {"hidden", hidden},
          {"dropout", dropout},
          {"num_classes", num_classes},
          {"layers", arch.layers},
          {"batchnorm", arch.batchnorm},
          {"activation", arch.activation},
          {"head", arch.head}};
}

GnnModel::GnnModel(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  if (config.input_dim < 1 || config.hidden < 1 || config.arch.layers < 1) {
    throw Error("gnn: input_dim, hidden and layers must be positive");
  }
  if (!(config.dropout >= 0.0) || config.dropout >= 1.0) throw Error("gnn: dropout must lie in [0, 1)");
  Rng rng(derive_seed(seed, 0x494e4954));
  Index in = config.input_dim;
  for (int l = 0; l < config.arch.layers; ++l) {
    const Index fan_in = config.kind == ModelKind::kSage ? 2 * in : in;
    const std::string prefix = "layer" + std::to_string(l);
    layers_.push_back({nn::Parameter(prefix + ".weight", glorot_uniform(fan_in, config.hidden, rng)),
                       nn::BatchNorm(config.hidden, prefix + ".bn")});
    in = config.hidden;
  }
  if (config.arch.head) {
    head_w_ = nn::Parameter("head.weight", glorot_uniform(config.hidden, config.num_classes, rng));
    head_b_ = nn::Parameter("head.bias", MatrixXd::Zero(1, config.num_classes));
  }
}

nn::Var GnnModel::forward(nn::Tape& tape, const nn::LinearOperator& op, nn::Var x, nn::Mode mode,
                          Rng& dropout_rng) {
  if (x.cols() != config_.input_dim) {
    throw Error("gnn: features " + shape_string(x.rows(), x.cols()) + " do not match input_dim " +
                std::to_string(config_.input_dim));
  }
  if (op.size() != x.rows()) {
    throw Error("gnn: operator over " + std::to_string(op.size()) + " nodes applied to " +
                std::to_string(x.rows()) + " feature rows");
  }
  nn::Var h = x;
  for (auto& layer : layers_) {
    const nn::Var w = tape.parameter(layer.weight);
    nn::Var z;
    if (config_.kind == ModelKind::kGcn) {
      z = nn::propagate(op, nn::matmul(h, w));
    } else {
      z = nn::matmul(nn::concat_cols(h, nn::propagate(op, h)), w);
    }
    if (config_.arch.batchnorm) z = nn::batchnorm(z, layer.bn, mode);
    if (config_.arch.activation) {
      z = config_.kind == ModelKind::kGcn ? nn::leaky_relu(z, 0.01) : nn::relu(z);
    }
    h = nn::dropout(z, config_.dropout, mode, dropout_rng);
  }
  if (config_.arch.head) {
    h = nn::add_bias(nn::matmul(h, tape.parameter(head_w_)), tape.parameter(head_b_));
  }
  return h;
}

MatrixXd GnnModel::predict_logits(const nn::LinearOperator& op, const MatrixXd& x) {
  nn::Tape tape;
  Rng unused(0);
  return forward(tape, op, tape.constant(x), nn::Mode::kEval, unused).value();
}

std::vector<nn::Parameter*> GnnModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (auto& layer : layers_) {
    out.push_back(&layer.weight);
    if (config_.arch.batchnorm) {
      out.push_back(&layer.bn.gamma);
      out.push_back(&layer.bn.beta);
    }
  }
  if (config_.arch.head) {
    out.push_back(&head_w_);
    out.push_back(&head_b_);
  }
  return out;
}

nn::NamedTensors GnnModel::state() {
  nn::NamedTensors out;
  for (auto* p : parameters()) out.emplace_back(p->name, p->value);
  if (config_.arch.batchnorm) {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const std::string prefix = "layer" + std::to_string(l) + ".bn.";
      out.emplace_back(prefix + "running_mean", layers_[l].bn.running_mean);
      out.emplace_back(prefix + "running_var", layers_[l].bn.running_var);
    }
  }
  return out;
}

nlohmann::json GnnModel::checkpoint() {
  nlohmann::json out = nn::save_checkpoint(state());
  out["config"] = config_.to_json();
  return out;
}

void GnnModel::load_checkpoint(const nlohmann::json& checkpoint) {
  nn::load_checkpoint(checkpoint, state());
}

}  // namespace stugraph::gnn
