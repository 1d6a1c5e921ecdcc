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

#include "stugraph/nn/ops.hpp"

#include <cmath>

namespace stugraph::nn {
namespace {

std::string shape_of(Var v) { return shape_string(v.rows(), v.cols()); }

void require_same_tape(Var a, Var b, const char* op) {
  if (a.tape() != b.tape()) throw Error(std::string(op) + ": operands live on different tapes");
}

void require_same_shape(Var a, Var b, const char* op) {
  require_same_tape(a, b, op);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(std::string(op) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  if (a.cols() != b.rows()) {
    throw Error("matmul: shape mismatch " + shape_of(a) + " vs " + shape_of(b));
  }
  const int ia = a.id();
  const int ib = b.id();
  return a.tape()->record("matmul", {ia, ib}, a.value() * b.value(),
                          [ia, ib](Tape& t, const MatrixXd& g) {
                            if (t.needs_grad(ia)) t.accumulate(ia, g * t.node(ib).value.transpose());
                            if (t.needs_grad(ib)) t.accumulate(ib, t.node(ia).value.transpose() * g);
                          });
}

Var propagate(const LinearOperator& op, Var x) {
  const int ix = x.id();
  const LinearOperator* p = &op;
  return x.tape()->record("propagate", {ix}, op.apply(x.value()),
                          [ix, p](Tape& t, const MatrixXd& g) {
                            t.accumulate(ix, p->apply_transpose(g));
                          });
}

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  const int ia = a.id();
  const int ib = b.id();
  return a.tape()->record("add", {ia, ib}, a.value() + b.value(),
                          [ia, ib](Tape& t, const MatrixXd& g) {
                            t.accumulate(ia, g);
                            t.accumulate(ib, g);
                          });
}

Var add_bias(Var x, Var bias) {
  require_same_tape(x, bias, "add_bias");
  if (bias.rows() != 1 || bias.cols() != x.cols()) {
    throw Error("add_bias: shape mismatch " + shape_of(x) + " vs " + shape_of(bias));
  }
  const int ix = x.id();
  const int ib = bias.id();
  MatrixXd out = x.value().rowwise() + bias.value().row(0);
  return x.tape()->record("add_bias", {ix, ib}, std::move(out),
                          [ix, ib](Tape& t, const MatrixXd& g) {
                            t.accumulate(ix, g);
                            if (t.needs_grad(ib)) t.accumulate(ib, g.colwise().sum());
                          });
}

Var hadamard(Var a, Var b) {
  require_same_shape(a, b, "hadamard");
  const int ia = a.id();
  const int ib = b.id();
  return a.tape()->record("hadamard", {ia, ib}, a.value().cwiseProduct(b.value()),
                          [ia, ib](Tape& t, const MatrixXd& g) {
                            if (t.needs_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.node(ib).value));
                            if (t.needs_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.node(ia).value));
                          });
}

Var scale(Var x, double factor) {
  const int ix = x.id();
  return x.tape()->record("scale", {ix}, x.value() * factor,
                          [ix, factor](Tape& t, const MatrixXd& g) { t.accumulate(ix, g * factor); });
}

Var sum(Var x) {
  const int ix = x.id();
  const Index r = x.rows();
  const Index c = x.cols();
  return x.tape()->record("sum", {ix}, MatrixXd::Constant(1, 1, x.value().sum()),
                          [ix, r, c](Tape& t, const MatrixXd& g) {
                            t.accumulate(ix, MatrixXd::Constant(r, c, g(0, 0)));
                          });
}

Var relu(Var x) { return leaky_relu(x, 0.0); }

Var leaky_relu(Var x, double slope) {
  const int ix = x.id();
  MatrixXd out = x.value().unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
  return x.tape()->record(slope == 0.0 ? "relu" : "leaky_relu", {ix}, std::move(out),
                          [ix, slope](Tape& t, const MatrixXd& g) {
                            const MatrixXd& in = t.node(ix).value;
                            t.accumulate(ix, g.binaryExpr(in, [slope](double gv, double v) {
                              return v > 0.0 ? gv : slope * gv;
                            }));
                          });
}

Var concat_cols(Var a, Var b) {
  require_same_tape(a, b, "concat_cols");
  if (a.rows() != b.rows()) {
    throw Error("concat_cols: shape mismatch " + shape_of(a) + " vs " + shape_of(b));
  }
  const int ia = a.id();
  const int ib = b.id();
  const Index ca = a.cols();
  const Index cb = b.cols();
  MatrixXd out(a.rows(), ca + cb);
  out << a.value(), b.value();
  return a.tape()->record("concat_cols", {ia, ib}, std::move(out),
                          [ia, ib, ca, cb](Tape& t, const MatrixXd& g) {
                            if (t.needs_grad(ia)) t.accumulate(ia, g.leftCols(ca));
                            if (t.needs_grad(ib)) t.accumulate(ib, g.rightCols(cb));
                          });
}

BatchNorm::BatchNorm(Index features, const std::string& prefix)
    : gamma(prefix + ".gamma", MatrixXd::Ones(1, features)),
      beta(prefix + ".beta", MatrixXd::Zero(1, features)),
      running_mean(RowVectorXd::Zero(features)),
      running_var(RowVectorXd::Ones(features)) {}

Var batchnorm(Var x, BatchNorm& state, Mode mode) {
  const Index n = x.rows();
  const Index f = x.cols();
  if (f != state.features()) {
    throw Error("batchnorm: input " + shape_of(x) + " does not match " +
                std::to_string(state.features()) + " features");
  }
  Tape& tape = *x.tape();
  const Var gamma = tape.parameter(state.gamma);
  const Var beta = tape.parameter(state.beta);
  const int ix = x.id();
  const int ig = gamma.id();
  const int ib = beta.id();
  const RowVectorXd g_row = state.gamma.value.row(0);
  const RowVectorXd b_row = state.beta.value.row(0);

  if (mode == Mode::kEval) {
    const RowVectorXd inv_std =
        (state.running_var.array() + state.eps).sqrt().inverse().matrix();
    const MatrixXd xhat =
        (x.value().rowwise() - state.running_mean).array().rowwise() * inv_std.array();
    MatrixXd out = (xhat.array().rowwise() * g_row.array()).rowwise() + b_row.array();
    return tape.record("batchnorm", {ix, ig, ib}, std::move(out),
                       [ix, ig, ib, inv_std, xhat](Tape& t, const MatrixXd& g) {
                         const RowVectorXd gam = t.node(ig).value.row(0);
                         if (t.needs_grad(ix)) {
                           t.accumulate(ix, (g.array().rowwise() *
                                             (gam.array() * inv_std.array())).matrix());
                         }
                         if (t.needs_grad(ig)) t.accumulate(ig, g.cwiseProduct(xhat).colwise().sum());
                         if (t.needs_grad(ib)) t.accumulate(ib, g.colwise().sum());
                       });
  }

  const RowVectorXd mean = x.value().colwise().mean();
  const MatrixXd centered = x.value().rowwise() - mean;
  const RowVectorXd var = centered.array().square().colwise().mean().matrix();
  const RowVectorXd inv_std = (var.array() + state.eps).sqrt().inverse().matrix();
  const MatrixXd xhat = centered.array().rowwise() * inv_std.array();
  MatrixXd out = (xhat.array().rowwise() * g_row.array()).rowwise() + b_row.array();

  const double m = state.momentum;
  const RowVectorXd unbiased = n > 1 ? RowVectorXd(var * (static_cast<double>(n) / static_cast<double>(n - 1))) : var;
  state.running_mean = (1.0 - m) * state.running_mean + m * mean;
  state.running_var = (1.0 - m) * state.running_var + m * unbiased;

  return tape.record(
      "batchnorm", {ix, ig, ib}, std::move(out),
      [ix, ig, ib, inv_std, xhat, n](Tape& t, const MatrixXd& g) {
        const RowVectorXd gam = t.node(ig).value.row(0);
        if (t.needs_grad(ix)) {
          const MatrixXd dxhat = g.array().rowwise() * gam.array();
          const RowVectorXd s1 = dxhat.colwise().sum();
          const RowVectorXd s2 = dxhat.cwiseProduct(xhat).colwise().sum();
          const double inv_n = 1.0 / static_cast<double>(n);
          MatrixXd dx = (static_cast<double>(n) * dxhat).rowwise() - s1;
          dx -= (xhat.array().rowwise() * s2.array()).matrix();
          dx = (dx.array().rowwise() * inv_std.array()).matrix() * inv_n;
          t.accumulate(ix, dx);
        }
        if (t.needs_grad(ig)) t.accumulate(ig, g.cwiseProduct(xhat).colwise().sum());
        if (t.needs_grad(ib)) t.accumulate(ib, g.colwise().sum());
      });
}

Var dropout(Var x, double p, Mode mode, Rng& rng) {
  if (!(p >= 0.0) || p >= 1.0) throw Error("dropout: p = " + std::to_string(p) + " must lie in [0, 1)");
  const int ix = x.id();
  if (mode == Mode::kEval || p == 0.0) {
    return x.tape()->record("dropout", {ix}, x.value(),
                            [ix](Tape& t, const MatrixXd& g) { t.accumulate(ix, g); });
  }
  const double keep_scale = 1.0 / (1.0 - p);
  MatrixXd mask(x.rows(), x.cols());
  for (Index j = 0; j < mask.cols(); ++j) {
    for (Index i = 0; i < mask.rows(); ++i) mask(i, j) = uniform01(rng) < p ? 0.0 : keep_scale;
  }
  MatrixXd out = x.value().cwiseProduct(mask);
  return x.tape()->record("dropout", {ix}, std::move(out),
                          [ix, mask = std::move(mask)](Tape& t, const MatrixXd& g) {
                            t.accumulate(ix, g.cwiseProduct(mask));
                          });
}

Var cross_entropy(Var logits, const std::vector<int>& labels, const std::vector<bool>& mask) {
  const Index n = logits.rows();
  const Index k = logits.cols();
  if (static_cast<Index>(labels.size()) != n || static_cast<Index>(mask.size()) != n) {
    throw Error("cross_entropy: logits " + shape_of(logits) + " with " +
                std::to_string(labels.size()) + " labels and mask of " + std::to_string(mask.size()));
  }
  std::vector<Index> rows;
  for (Index i = 0; i < n; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k) {
      throw Error("cross_entropy: label " + std::to_string(y) + " outside [0, " +
                  std::to_string(k) + ")");
    }
    rows.push_back(i);
  }
  if (rows.empty()) throw Error("cross_entropy: mask selects no rows");
  const MatrixXd& z = logits.value();
  double total = 0.0;
  for (Index i : rows) {
    const double mx = z.row(i).maxCoeff();
    const double lse = mx + std::log((z.row(i).array() - mx).exp().sum());
    total += lse - z(i, labels[static_cast<std::size_t>(i)]);
  }
  const double count = static_cast<double>(rows.size());
  const int il = logits.id();
  return logits.tape()->record(
      "cross_entropy", {il}, MatrixXd::Constant(1, 1, total / count),
      [il, rows, labels, count](Tape& t, const MatrixXd& g) {
        const MatrixXd& zz = t.node(il).value;
        MatrixXd d = MatrixXd::Zero(zz.rows(), zz.cols());
        for (Index i : rows) {
          const double mx = zz.row(i).maxCoeff();
          const RowVectorXd e = (zz.row(i).array() - mx).exp().matrix();
          d.row(i) = e / e.sum();
          d(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
        }
        t.accumulate(il, d * (g(0, 0) / count));
      });
}

MatrixXd softmax_rows(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const RowVectorXd e = (logits.row(i).array() - logits.row(i).maxCoeff()).exp().matrix();
    out.row(i) = e / e.sum();
  }
  return out;
}

std::vector<int> argmax_rows(const MatrixXd& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    logits.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace stugraph::nn
