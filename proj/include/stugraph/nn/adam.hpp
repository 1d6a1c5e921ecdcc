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

#ifndef STUGRAPH_NN_ADAM_HPP_
#define STUGRAPH_NN_ADAM_HPP_

#include <vector>

#include "stugraph/nn/autodiff.hpp"

namespace stugraph::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction over a fixed parameter list.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamOptions options);

  /// Applies one update from the accumulated gradients. Throws, without
  /// touching any parameter, if a gradient has a non-finite entry.
  void step();
  void zero_grad();

  long steps() const { return t_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<MatrixXd>& first_moments() const { return m_; }
  const std::vector<MatrixXd>& second_moments() const { return v_; }

 private:
  std::vector<Parameter*> params_;
  AdamOptions options_;
  std::vector<MatrixXd> m_;
  std::vector<MatrixXd> v_;
  long t_ = 0;
};

}  // namespace stugraph::nn

#endif  // STUGRAPH_NN_ADAM_HPP_
