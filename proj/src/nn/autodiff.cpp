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

#include "stugraph/nn/autodiff.hpp"

namespace stugraph::nn {

const MatrixXd& Var::value() const { return tape_->node(id_).value; }
const MatrixXd& Var::grad() const { return tape_->node(id_).grad; }

Var Tape::push(Node node) {
  if (!node.value.allFinite()) throw Error(node.op + ": non-finite value");
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::constant(MatrixXd value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::variable(MatrixXd value) {
  Node n;
  n.op = "variable";
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::parameter(Parameter& p) {
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) p.zero_grad();
  Node n;
  n.op = "parameter";
  n.value = p.value;
  n.requires_grad = true;
  n.parameter = &p;
  return push(std::move(n));
}

Var Tape::record(std::string op, std::vector<int> inputs, MatrixXd value, Backward backward) {
  if (!value.allFinite()) throw Error(op + ": forward produced a non-finite value");
  Node n;
  n.op = std::move(op);
  for (int id : inputs) n.requires_grad = n.requires_grad || needs_grad(id);
  n.inputs = std::move(inputs);
  n.value = std::move(value);
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

void Tape::accumulate(int id, const MatrixXd& g) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.requires_grad) return;
  if (g.rows() != n.value.rows() || g.cols() != n.value.cols()) {
    throw Error("gradient for '" + n.op + "' has shape " + shape_string(g.rows(), g.cols()) +
                ", expected " + shape_string(n.value.rows(), n.value.cols()));
  }
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Tape::backward(Var loss) {
  if (loss.tape() != this) throw Error("backward: loss was recorded on a different tape");
  const Node& root = nodes_[static_cast<std::size_t>(loss.id())];
  if (root.value.rows() != 1 || root.value.cols() != 1) {
    throw Error("backward: loss must be 1x1, got " +
                shape_string(root.value.rows(), root.value.cols()));
  }
  for (auto& n : nodes_) n.grad.resize(0, 0);
  accumulate(loss.id(), MatrixXd::Ones(1, 1));
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, n.grad);
    if (n.parameter != nullptr) n.parameter->grad += n.grad;
  }
}

}  // namespace stugraph::nn
