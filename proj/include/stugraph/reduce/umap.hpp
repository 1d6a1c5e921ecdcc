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

#ifndef STUGRAPH_REDUCE_UMAP_HPP_
#define STUGRAPH_REDUCE_UMAP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/common.hpp"

namespace stugraph::reduce {

enum class ReductionMethod { kPca, kUmap, kPcaThenUmap };

std::string to_string(ReductionMethod method);
ReductionMethod parse_reduction_method(const std::string& name);

/// A reduced representation together with the settings that produced it.
struct Embedding {
  MatrixXd values;
  ReductionMethod method = ReductionMethod::kPca;
  nlohmann::json params;
};

struct UmapParams {
  int n_neighbors = 15;
  double min_dist = 0.1;
  double spread = 1.0;
  int n_components = 2;
  int n_epochs = 200;
  int negative_sample_rate = 5;
  double learning_rate = 1.0;
  double repulsion_strength = 1.0;
  // Output-space curve coefficients; non-positive values mean "fit from
  // min_dist and spread".
  double a = 0.0;
  double b = 0.0;
  std::uint64_t seed = 0;

  void validate(Index n_points) const;
  nlohmann::json to_json() const;
  static UmapParams from_json(const nlohmann::json& j);
};

struct CurveCoefficients {
  double a = 0.0;
  double b = 0.0;
};

/// Least-squares fit of 1 / (1 + a d^(2b)) to the offset-exponential target
/// that is 1 below min_dist and exp(-(d - min_dist) / spread) above it.
CurveCoefficients fit_curve_coefficients(double spread, double min_dist);

/// Symmetrized fuzzy membership graph built from exact k-NN.
struct FuzzyGraph {
  SparseMatrixXd weights;
  VectorXd rho;    // distance to nearest neighbor
  VectorXd sigma;  // per-point bandwidth
};

/// Bandwidth search: sum_j exp(-max(0, d_j - rho) / sigma) = log2(n_neighbors)
/// over the (n_neighbors - 1) nearest other points.
FuzzyGraph fuzzy_simplicial_set(const MatrixXd& x, int n_neighbors);

/// Leading nontrivial eigenvectors of the normalized graph Laplacian, or an
/// empty matrix when the graph is disconnected.
MatrixXd spectral_layout(const SparseMatrixXd& weights, int dims, std::uint64_t seed);

Embedding umap_embed(const MatrixXd& x, const UmapParams& params);

Embedding pca_embed(const MatrixXd& x, Index components);

/// PCA to min(intermediate, achievable rank) components, then UMAP.
Embedding pca_then_umap(const MatrixXd& x, Index intermediate, const UmapParams& params);

}  // namespace stugraph::reduce

#endif  // STUGRAPH_REDUCE_UMAP_HPP_
