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

#ifndef STUGRAPH_REDUCE_PCA_HPP_
#define STUGRAPH_REDUCE_PCA_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "stugraph/common.hpp"

namespace stugraph::reduce {

template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> values;   // descending
  Matrix<Scalar> vectors;  // column j pairs with values(j)
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Rotations are applied in a
/// fixed (p, q) order so the result is deterministic.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                     int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) {
    throw Error("jacobi_eigen: matrix is not square (" + shape_string(input.rows(), input.cols()) +
                ")");
  }
  const Index n = input.rows();
  Matrix<Scalar> a = input;
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
  const Scalar scale = std::max(a.norm(), std::numeric_limits<Scalar>::min());
  const Scalar tol = std::numeric_limits<Scalar>::epsilon() * scale;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    Scalar off = 0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= tol) break;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0;
        a(q, p) = 0;
        for (Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) > a(j, j); });
  SymmetricEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values(j) = a(order[j], order[j]);
    out.vectors.col(j) = v.col(order[j]);
  }
  out.sweeps = sweep;
  return out;
}

/// Flips each column so that its largest-magnitude entry is positive.
template <typename Scalar>
void canonicalize_signs(Matrix<Scalar>& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    Index arg = 0;
    columns.col(j).cwiseAbs().maxCoeff(&arg);
    if (columns(arg, j) < 0) columns.col(j) = -columns.col(j);
  }
}

template <typename Scalar>
struct PcaModel {
  RowVector<Scalar> mean;
  Matrix<Scalar> components;  // D x D', orthonormal columns
  Vector<Scalar> eigenvalues;  // D', descending, clamped at zero
  Scalar total_variance = 0;  // trace of the sample covariance

  Matrix<Scalar> transform(const Matrix<Scalar>& x) const {
    return (x.rowwise() - mean) * components;
  }
  Matrix<Scalar> inverse_transform(const Matrix<Scalar>& y) const {
    return (y * components.transpose()).rowwise() + mean;
  }
};

template <typename Scalar>
struct PcaResult {
  PcaModel<Scalar> model;
  Matrix<Scalar> embedding;
};

/// Exact PCA via the sample covariance (divisor N - 1).
template <typename Derived>
PcaResult<typename Derived::Scalar> pca_fit_transform(const Eigen::MatrixBase<Derived>& x,
                                                      Index d_out) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.rows();
  const Index d = x.cols();
  const Index achievable = std::min(n - 1, d);
  if (d_out < 1 || d_out > achievable) {
    throw Error("pca: requested " + std::to_string(d_out) +
                " components but the achievable rank is " + std::to_string(achievable));
  }
  PcaResult<Scalar> out;
  out.model.mean = x.colwise().mean();
  const Matrix<Scalar> centered = x.rowwise() - out.model.mean;
  const Matrix<Scalar> cov = (centered.transpose() * centered) / Scalar(n - 1);
  out.model.total_variance = cov.trace();
  auto eig = jacobi_eigen(cov);
  out.model.components = eig.vectors.leftCols(d_out);
  canonicalize_signs(out.model.components);
  out.model.eigenvalues = eig.values.head(d_out).cwiseMax(Scalar(0));
  out.embedding = centered * out.model.components;
  return out;
}

}  // namespace stugraph::reduce

#endif  // STUGRAPH_REDUCE_PCA_HPP_
