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

#ifndef STUGRAPH_NN_AUTODIFF_HPP_
#define STUGRAPH_NN_AUTODIFF_HPP_

#include <functional>
#include <string>
#include <vector>

#include "stugraph/common.hpp"

namespace stugraph::nn {

enum class Mode { kTrain, kEval };

/// A trainable matrix and its accumulated gradient.
struct Parameter {
  std::string name;
  MatrixXd value;
  MatrixXd grad;

  Parameter() = default;
  Parameter(std::string n, MatrixXd v)
      : name(std::move(n)), value(std::move(v)), grad(MatrixXd::Zero(value.rows(), value.cols())) {}
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

/// Handle to a node on a tape. Cheap to copy.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  const MatrixXd& value() const;
  const MatrixXd& grad() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

/// Records primitive applications and replays them in reverse.
class Tape {
 public:
  using Backward = std::function<void(Tape& tape, const MatrixXd& out_grad)>;

  struct Node {
    std::string op;
    std::vector<int> inputs;
    MatrixXd value;
    MatrixXd grad;
    bool requires_grad = false;
    Backward backward;
    Parameter* parameter = nullptr;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives a gradient.
  Var constant(MatrixXd value);
  /// Leaf whose gradient is kept on the tape.
  Var variable(MatrixXd value);
  /// Leaf bound to a parameter; backward adds into `p.grad`.
  Var parameter(Parameter& p);

  /// Appends a primitive result. `backward` runs only when some input needs a
  /// gradient. Throws if `value` has a non-finite entry.
  Var record(std::string op, std::vector<int> inputs, MatrixXd value, Backward backward);

  /// Reverse accumulation from a 1x1 node.
  void backward(Var loss);

  bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }
  /// Adds `g` into the gradient slot of node `id` if it requires one.
  void accumulate(int id, const MatrixXd& g);

  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  Var push(Node node);
  std::vector<Node> nodes_;
};

}  // namespace stugraph::nn

#endif  // STUGRAPH_NN_AUTODIFF_HPP_
