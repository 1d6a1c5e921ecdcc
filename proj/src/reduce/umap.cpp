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

#include "stugraph/reduce/umap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include <Eigen/Eigenvalues>

#include "stugraph/graph/kdtree.hpp"
#include "stugraph/parallel.hpp"
#include "stugraph/reduce/pca.hpp"

namespace stugraph::reduce {
namespace {

constexpr double kSmoothTolerance = 1e-5;
constexpr double kMinDistScale = 1e-3;
constexpr int kBandwidthIterations = 64;

double clip_gradient(double g) { return std::clamp(g, -4.0, 4.0); }

void require_finite(const MatrixXd& x, const char* what) {
  if (!x.allFinite()) throw Error(std::string(what) + ": input contains non-finite values");
}

bool is_connected(const SparseMatrixXd& w) {
  const Index n = w.rows();
  if (n == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index visited = 1;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (SparseMatrixXd::InnerIterator it(w, v); it; ++it) {
      if (it.value() > 0 && !seen[static_cast<std::size_t>(it.col())]) {
        seen[static_cast<std::size_t>(it.col())] = 1;
        ++visited;
        stack.push_back(it.col());
      }
    }
  }
  return visited == n;
}

// Per-column min-max rescale to [0, 10].
void rescale_layout(MatrixXd& y) {
  for (Index d = 0; d < y.cols(); ++d) {
    const double lo = y.col(d).minCoeff();
    const double hi = y.col(d).maxCoeff();
    if (hi > lo) {
      y.col(d) = 10.0 * (y.col(d).array() - lo) / (hi - lo);
    } else {
      y.col(d).setZero();
    }
  }
}

void optimize_layout(MatrixXd& y, const SparseMatrixXd& graph, const UmapParams& p, double a,
                     double b, Rng& rng) {
  struct Edge {
    Index head;
    Index tail;
    double weight;
  };
  std::vector<Edge> edges;
  double max_weight = 0.0;
  for (Index r = 0; r < graph.outerSize(); ++r) {
    for (SparseMatrixXd::InnerIterator it(graph, r); it; ++it) {
      max_weight = std::max(max_weight, it.value());
    }
  }
  const double cutoff = max_weight / p.n_epochs;
  for (Index r = 0; r < graph.outerSize(); ++r) {
    for (SparseMatrixXd::InnerIterator it(graph, r); it; ++it) {
      if (it.value() >= cutoff && it.value() > 0) edges.push_back({r, it.col(), it.value()});
    }
  }
  const std::size_t m = edges.size();
  std::vector<double> epochs_per_sample(m);
  for (std::size_t e = 0; e < m; ++e) epochs_per_sample[e] = max_weight / edges[e].weight;
  std::vector<double> epochs_per_negative(m);
  for (std::size_t e = 0; e < m; ++e) {
    epochs_per_negative[e] = epochs_per_sample[e] / p.negative_sample_rate;
  }
  std::vector<double> next_sample = epochs_per_sample;
  std::vector<double> next_negative = epochs_per_negative;

  const Index n = y.rows();
  const Index dims = y.cols();
  for (int epoch = 0; epoch < p.n_epochs; ++epoch) {
    const double alpha = p.learning_rate * (1.0 - static_cast<double>(epoch) / p.n_epochs);
    for (std::size_t e = 0; e < m; ++e) {
      if (next_sample[e] > epoch) continue;
      const Index j = edges[e].head;
      const Index k = edges[e].tail;
      double dist2 = (y.row(j) - y.row(k)).squaredNorm();
      double coeff = 0.0;
      if (dist2 > 0.0) {
        coeff = -2.0 * a * b * std::pow(dist2, b - 1.0) / (a * std::pow(dist2, b) + 1.0);
      }
      for (Index d = 0; d < dims; ++d) {
        const double g = clip_gradient(coeff * (y(j, d) - y(k, d)));
        y(j, d) += g * alpha;
        y(k, d) -= g * alpha;
      }
      next_sample[e] += epochs_per_sample[e];

      const auto n_neg =
          static_cast<int>((epoch - next_negative[e]) / epochs_per_negative[e]);
      for (int s = 0; s < n_neg; ++s) {
        const auto other = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
        dist2 = (y.row(j) - y.row(other)).squaredNorm();
        if (dist2 > 0.0) {
          coeff = 2.0 * p.repulsion_strength * b /
                  ((0.001 + dist2) * (a * std::pow(dist2, b) + 1.0));
        } else if (j == other) {
          continue;
        } else {
          coeff = 0.0;
        }
        for (Index d = 0; d < dims; ++d) {
          const double g = coeff > 0.0 ? clip_gradient(coeff * (y(j, d) - y(other, d))) : 4.0;
          y(j, d) += g * alpha;
        }
      }
      next_negative[e] += n_neg * epochs_per_negative[e];
    }
  }
}

}  // namespace

std::string to_string(ReductionMethod method) {
  switch (method) {
    case ReductionMethod::kPca:
      return "pca";
    case ReductionMethod::kUmap:
      return "umap";
    case ReductionMethod::kPcaThenUmap:
      return "pca_then_umap";
  }
  return "unknown";
}

ReductionMethod parse_reduction_method(const std::string& name) {
  if (name == "pca") return ReductionMethod::kPca;
  if (name == "umap") return ReductionMethod::kUmap;
  if (name == "pca+umap" || name == "pca_then_umap" || name == "pca_umap") {
    return ReductionMethod::kPcaThenUmap;
  }
  throw Error("unknown reduction method '" + name + "'");
}

void UmapParams::validate(Index n_points) const {
  if (n_neighbors < 2) throw Error("umap: n_neighbors must be at least 2");
  if (n_neighbors >= n_points) {
    throw Error("umap: n_neighbors = " + std::to_string(n_neighbors) +
                " must be smaller than the number of points (" + std::to_string(n_points) + ")");
  }
  if (!(min_dist > 0.0) || !(min_dist < spread)) {
    throw Error("umap: require 0 < min_dist < spread");
  }
  if (n_components < 1) throw Error("umap: n_components must be positive");
  if (n_epochs < 1) throw Error("umap: n_epochs must be positive");
  if (negative_sample_rate < 0) throw Error("umap: negative_sample_rate must be >= 0");
}

nlohmann::json UmapParams::to_json() const {
  return {{"n_neighbors", n_neighbors},
          {"min_dist", min_dist},
          {"spread", spread},
          {"n_components", n_components},
          {"n_epochs", n_epochs},
          {"negative_sample_rate", negative_sample_rate},
          {"learning_rate", learning_rate},
          {"repulsion_strength", repulsion_strength},
          {"a", a},
          {"b", b},
          {"seed", seed}};
}

UmapParams UmapParams::from_json(const nlohmann::json& j) {
  UmapParams p;
  p.n_neighbors = j.value("n_neighbors", p.n_neighbors);
  p.min_dist = j.value("min_dist", p.min_dist);
  p.spread = j.value("spread", p.spread);
  p.n_components = j.value("n_components", p.n_components);
  p.n_epochs = j.value("n_epochs", p.n_epochs);
  p.negative_sample_rate = j.value("negative_sample_rate", p.negative_sample_rate);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.repulsion_strength = j.value("repulsion_strength", p.repulsion_strength);
  p.a = j.value("a", p.a);
  p.b = j.value("b", p.b);
  p.seed = j.value("seed", p.seed);
  return p;
}

CurveCoefficients fit_curve_coefficients(double spread, double min_dist) {
  constexpr int kSamples = 300;
  VectorXd xs = VectorXd::LinSpaced(kSamples, 0.0, 3.0 * spread);
  VectorXd target(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    target(i) = xs(i) < min_dist ? 1.0 : std::exp(-(xs(i) - min_dist) / spread);
  }
  auto residuals = [&](double a, double b, VectorXd& r, Eigen::MatrixX2d* jac) {
    r.resize(kSamples);
    if (jac != nullptr) jac->resize(kSamples, 2);
    for (int i = 0; i < kSamples; ++i) {
      const double x = xs(i);
      const double u = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
      const double denom = 1.0 + a * u;
      r(i) = 1.0 / denom - target(i);
      if (jac != nullptr) {
        (*jac)(i, 0) = -u / (denom * denom);
        (*jac)(i, 1) = x > 0.0 ? -a * u * 2.0 * std::log(x) / (denom * denom) : 0.0;
      }
    }
  };

  // Levenberg-Marquardt from (1, 1).
  double a = 1.0;
  double b = 1.0;
  double lambda = 1e-3;
  VectorXd r;
  Eigen::MatrixX2d jac;
  residuals(a, b, r, &jac);
  double cost = r.squaredNorm();
  for (int iter = 0; iter < 500; ++iter) {
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    const Eigen::Vector2d grad = jac.transpose() * r;
    Eigen::Matrix2d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal();
    const Eigen::Vector2d step = damped.ldlt().solve(-grad);
    VectorXd r_new;
    residuals(a + step(0), b + step(1), r_new, nullptr);
    const double cost_new = r_new.squaredNorm();
    if (std::isfinite(cost_new) && cost_new < cost) {
      a += step(0);
      b += step(1);
      const double improvement = cost - cost_new;
      cost = cost_new;
      residuals(a, b, r, &jac);
      lambda = std::max(lambda * 0.3, 1e-12);
      if (improvement <= 1e-15 * std::max(cost, 1e-300) && step.norm() < 1e-12) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  return {a, b};
}

FuzzyGraph fuzzy_simplicial_set(const MatrixXd& x, int n_neighbors) {
  const Index n = x.rows();
  if (n_neighbors < 2) throw Error("umap: n_neighbors must be at least 2");
  if (n_neighbors >= n) {
    throw Error("umap: n_neighbors = " + std::to_string(n_neighbors) +
                " must be smaller than the number of points (" + std::to_string(n) + ")");
  }
  const Index k = n_neighbors - 1;  // the point itself is the first neighbor
  const auto knn = graph::all_knn<double>(x, k);
  const double target = std::log2(static_cast<double>(n_neighbors));
  const double mean_all = knn.distances.mean();

  FuzzyGraph out;
  out.rho.resize(n);
  out.sigma.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
    const auto i = static_cast<Index>(ii);
    double rho = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (knn.distances(i, j) > 0.0) {
        rho = knn.distances(i, j);
        break;
      }
    }
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double mid = 1.0;
    for (int iter = 0; iter < kBandwidthIterations; ++iter) {
      double psum = 0.0;
      for (Index j = 0; j < k; ++j) {
        const double d = knn.distances(i, j) - rho;
        psum += d > 0.0 ? std::exp(-d / mid) : 1.0;
      }
      if (std::abs(psum - target) < kSmoothTolerance) break;
      if (psum > target) {
        hi = mid;
        mid = 0.5 * (lo + hi);
      } else {
        lo = mid;
        mid = std::isinf(hi) ? mid * 2.0 : 0.5 * (lo + hi);
      }
    }
    const double mean_i = knn.distances.row(i).mean();
    const double floor = kMinDistScale * (rho > 0.0 ? mean_i : mean_all);
    out.rho(i) = rho;
    out.sigma(i) = std::max(mid, floor);
  });

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n * k));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double d = knn.distances(i, j) - out.rho(i);
      const double w = d <= 0.0 ? 1.0 : std::exp(-d / out.sigma(i));
      triplets.emplace_back(i, knn.indices(i, j), w);
    }
  }
  SparseMatrixXd directed(n, n);
  directed.setFromTriplets(triplets.begin(), triplets.end());
  const SparseMatrixXd transposed = directed.transpose();
  const SparseMatrixXd product = directed.cwiseProduct(transposed);
  out.weights = directed + transposed - product;
  out.weights.prune(0.0);
  return out;
}

MatrixXd spectral_layout(const SparseMatrixXd& weights, int dims, std::uint64_t seed) {
  const Index n = weights.rows();
  if (!is_connected(weights) || n <= dims + 1) return {};
  VectorXd degree = VectorXd::Zero(n);
  for (Index r = 0; r < n; ++r) {
    for (SparseMatrixXd::InnerIterator it(weights, r); it; ++it) degree(r) += it.value();
  }
  const VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  const SparseMatrixXd normalized = inv_sqrt.asDiagonal() * weights * inv_sqrt.asDiagonal();

  // Lanczos with full reorthogonalization on the complement of the trivial
  // eigenvector sqrt(degree).
  VectorXd trivial = degree.cwiseSqrt();
  trivial.normalize();
  const Index steps = std::min<Index>(n - 1, std::max<Index>(4 * dims + 40, 100));
  MatrixXd basis(n, steps);
  VectorXd alpha(steps);
  VectorXd beta = VectorXd::Zero(steps);
  Rng rng(seed);
  auto random_start = [&]() {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform01(rng) - 0.5;
    return v;
  };
  auto orthogonalize = [&](VectorXd& v, Index upto) {
    for (int pass = 0; pass < 2; ++pass) {
      v -= trivial * trivial.dot(v);
      if (upto > 0) v -= basis.leftCols(upto) * (basis.leftCols(upto).transpose() * v);
    }
  };
  VectorXd q = random_start();
  orthogonalize(q, 0);
  q.normalize();
  Index m = 0;
  for (; m < steps; ++m) {
    basis.col(m) = q;
    VectorXd w = normalized * q;
    alpha(m) = q.dot(w);
    orthogonalize(w, m + 1);
    const double norm = w.norm();
    if (m + 1 == steps) break;
    if (norm < 1e-10) {
      // Invariant subspace found; continue from a fresh direction.
      VectorXd fresh = random_start();
      orthogonalize(fresh, m + 1);
      if (fresh.norm() < 1e-10) {
        ++m;
        break;
      }
      beta(m) = 0.0;
      q = fresh.normalized();
    } else {
      beta(m) = norm;
      q = w / norm;
    }
  }
  const Index used = std::min(m + 1, steps);
  if (used < dims) return {};
  MatrixXd tri = MatrixXd::Zero(used, used);
  for (Index i = 0; i < used; ++i) {
    tri(i, i) = alpha(i);
    if (i + 1 < used) tri(i, i + 1) = tri(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
  // Largest eigenvalues of the normalized adjacency are the smallest of the Laplacian.
  MatrixXd layout(n, dims);
  for (int d = 0; d < dims; ++d) {
    const Index col = used - 1 - d;
    layout.col(d) = basis.leftCols(used) * solver.eigenvectors().col(col);
  }
  return layout;
}

Embedding umap_embed(const MatrixXd& x, const UmapParams& params) {
  require_finite(x, "umap");
  params.validate(x.rows());
  double a = params.a;
  double b = params.b;
  if (a <= 0.0 || b <= 0.0) {
    const auto fit = fit_curve_coefficients(params.spread, params.min_dist);
    a = fit.a;
    b = fit.b;
  }
  const FuzzyGraph fuzzy = fuzzy_simplicial_set(x, params.n_neighbors);
  Rng rng(params.seed);
  MatrixXd y = spectral_layout(fuzzy.weights, params.n_components, derive_seed(params.seed, 1));
  std::string init = "spectral";
  if (y.size() == 0) {
    init = "random";
    y.resize(x.rows(), params.n_components);
    for (Index i = 0; i < y.rows(); ++i) {
      for (Index d = 0; d < y.cols(); ++d) y(i, d) = 20.0 * uniform01(rng) - 10.0;
    }
  } else {
    y *= 10.0 / y.cwiseAbs().maxCoeff();
    for (Index i = 0; i < y.rows(); ++i) {
      for (Index d = 0; d < y.cols(); ++d) y(i, d) += 1e-4 * (uniform01(rng) - 0.5);
    }
  }
  rescale_layout(y);
  optimize_layout(y, fuzzy.weights, params, a, b, rng);
  if (!y.allFinite()) throw Error("umap: optimization produced non-finite coordinates");

  Embedding out;
  out.values = std::move(y);
  out.method = ReductionMethod::kUmap;
  out.params = params.to_json();
  out.params["a"] = a;
  out.params["b"] = b;
  out.params["init"] = init;
  return out;
}

Embedding pca_embed(const MatrixXd& x, Index components) {
  require_finite(x, "pca");
  auto result = pca_fit_transform(x, components);
  Embedding out;
  out.values = std::move(result.embedding);
  out.method = ReductionMethod::kPca;
  out.params = {{"n_components", components},
                {"explained_variance", std::vector<double>(result.model.eigenvalues.data(),
                                                           result.model.eigenvalues.data() +
                                                               result.model.eigenvalues.size())},
                {"total_variance", result.model.total_variance}};
  return out;
}

Embedding pca_then_umap(const MatrixXd& x, Index intermediate, const UmapParams& params) {
  require_finite(x, "pca_then_umap");
  const Index width = std::min(intermediate, std::min(x.rows() - 1, x.cols()));
  const auto pca = pca_fit_transform(x, width);
  Embedding out = umap_embed(pca.embedding, params);
  out.method = ReductionMethod::kPcaThenUmap;
  out.params["pca_components"] = width;
  return out;
}

}  // namespace stugraph::reduce
