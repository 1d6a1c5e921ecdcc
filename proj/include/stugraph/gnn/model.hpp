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

#ifndef STUGRAPH_GNN_MODEL_HPP_
#define STUGRAPH_GNN_MODEL_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/common.hpp"
#include "stugraph/graph/graph.hpp"
#include "stugraph/nn/autodiff.hpp"
#include "stugraph/nn/checkpoint.hpp"
#include "stugraph/nn/ops.hpp"
#include "stugraph/nn/propagation.hpp"

namespace stugraph::gnn {

/// D~^{-1/2} (A + I) D~^{-1/2} with D~ the degree matrix of A + I.
SparseMatrixXd normalize_adjacency(const graph::Graph& graph);

/// Row v averages the neighbors of v; rows of isolated nodes are empty.
SparseMatrixXd neighbor_mean_matrix(const graph::Graph& graph);

enum class ModelKind { kGcn, kSage };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

/// Propagation operator a model of `kind` uses on `graph`. When every
/// component is a clique the O(N * F) clique form is used unless disabled.
std::unique_ptr<nn::LinearOperator> make_operator(const graph::Graph& graph, ModelKind kind,
                                                  bool allow_clique_form = true);

/// Switches that exist for testing reduced architectures.
struct Architecture {
  int layers = 3;
  bool batchnorm = true;
  bool activation = true;
  bool head = true;
};

struct ModelConfig {
  ModelKind kind = ModelKind::kSage;
  Index input_dim = 0;
  Index hidden = 64;
  double dropout = 0.5;
  Index num_classes = 3;
  Architecture arch;

  nlohmann::json to_json() const;
};

/// GCN layer:  H <- dropout(leaky_relu(bn(A_hat * H * W)))
/// SAGE layer: H <- dropout(relu(bn([H, mean_N(H)] * W)))
/// followed by a dense head with bias.
class GnnModel {
 public:
  struct Layer {
    nn::Parameter weight;
    nn::BatchNorm bn;
  };

  GnnModel() = default;
  GnnModel(const ModelConfig& config, std::uint64_t seed);

  /// `op` must come from make_operator for the same kind (or an equivalent).
  nn::Var forward(nn::Tape& tape, const nn::LinearOperator& op, nn::Var x, nn::Mode mode,
                  Rng& dropout_rng);
  /// Eval-mode logits.
  MatrixXd predict_logits(const nn::LinearOperator& op, const MatrixXd& x);

  std::vector<nn::Parameter*> parameters();
  /// Parameters and running statistics, by name.
  nn::NamedTensors state();
  nlohmann::json checkpoint();
  void load_checkpoint(const nlohmann::json& checkpoint);

  const ModelConfig& config() const { return config_; }
  std::vector<Layer>& layers() { return layers_; }
  nn::Parameter& head_weight() { return head_w_; }
  nn::Parameter& head_bias() { return head_b_; }

 private:
  ModelConfig config_;
  std::vector<Layer> layers_;
  nn::Parameter head_w_;
  nn::Parameter head_b_;
};

}  // namespace stugraph::gnn

#endif  // STUGRAPH_GNN_MODEL_HPP_
