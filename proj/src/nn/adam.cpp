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

#include "stugraph/nn/adam.hpp"

#include <cmath>

namespace stugraph::nn {

Adam::Adam(std::vector<Parameter*> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  if (!(options_.lr > 0.0)) throw Error("adam: learning rate must be positive");
  for (Parameter* p : params_) {
    m_.push_back(MatrixXd::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(MatrixXd::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step() {
  for (const Parameter* p : params_) {
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols()) {
      throw Error("adam: gradient of '" + p->name + "' has shape " +
                  shape_string(p->grad.rows(), p->grad.cols()) + ", parameter is " +
                  shape_string(p->value.rows(), p->value.cols()));
    }
    if (!p->grad.allFinite()) throw Error("adam: non-finite gradient for '" + p->name + "'");
  }
  ++t_;
  const auto& o = options_;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    m_[i] = o.beta1 * m_[i] + (1.0 - o.beta1) * p.grad;
    v_[i] = o.beta2 * v_[i] + (1.0 - o.beta2) * p.grad.cwiseAbs2();
    p.value.array() -= o.lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + o.eps);
  }
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace stugraph::nn
