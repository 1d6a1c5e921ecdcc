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

#include "stugraph/baseline/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stugraph::baseline {

void ForestSearchSpace::validate() const {
  if (trees_min < 1 || trees_min > trees_max) throw Error("forest search: need 1 <= trees_min <= trees_max");
  if (depth_min < 1 || depth_min > depth_max) throw Error("forest search: need 1 <= depth_min <= depth_max");
  if (leaf_min < 1 || leaf_min > leaf_max) throw Error("forest search: need 1 <= leaf_min <= leaf_max");
}

nlohmann::json ForestSearchSpace::to_json() const {
  return {{"n_trees", {trees_min, trees_max}},
          {"max_depth", {depth_min, depth_max}},
          {"allow_unlimited_depth", allow_unlimited_depth},
          {"min_samples_leaf", {leaf_min, leaf_max}}};
}

ForestSearchSpace ForestSearchSpace::from_json(const nlohmann::json& j) {
  ForestSearchSpace s;
  if (j.contains("n_trees")) {
    s.trees_min = j.at("n_trees").at(0).get<int>();
    s.trees_max = j.at("n_trees").at(1).get<int>();
  }
  if (j.contains("max_depth")) {
    s.depth_min = j.at("max_depth").at(0).get<int>();
    s.depth_max = j.at("max_depth").at(1).get<int>();
  }
  s.allow_unlimited_depth = j.value("allow_unlimited_depth", s.allow_unlimited_depth);
  if (j.contains("min_samples_leaf")) {
    s.leaf_min = j.at("min_samples_leaf").at(0).get<Index>();
    s.leaf_max = j.at("min_samples_leaf").at(1).get<Index>();
  }
  s.validate();
  return s;
}

std::vector<ForestParams> sample_forest_params(const ForestSearchSpace& space, int n_combos,
                                               std::uint64_t seed) {
  space.validate();
  if (n_combos < 1) throw Error("forest search: n_combos must be at least 1");
  Rng rng(derive_seed(seed, 0x52464353));
  std::vector<ForestParams> out;
  for (int i = 0; i < n_combos; ++i) {
    ForestParams p;
    p.n_trees = space.trees_min + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(space.trees_max - space.trees_min + 1)));
    const int depth_choices = space.depth_max - space.depth_min + 1 + (space.allow_unlimited_depth ? 1 : 0);
    const int pick = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(depth_choices)));
    p.tree.max_depth = pick == space.depth_max - space.depth_min + 1 ? -1 : space.depth_min + pick;
    p.tree.min_samples_leaf = space.leaf_min + static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(space.leaf_max - space.leaf_min + 1)));
    out.push_back(p);
  }
  return out;
}

std::vector<std::vector<Index>> stratified_folds(const std::vector<int>& y, const std::vector<Index>& rows,
                                                 int folds, int num_classes, std::uint64_t seed) {
  if (folds < 2) throw Error("cross-validation: need at least 2 folds");
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(num_classes));
  for (Index r : rows) by_class[static_cast<std::size_t>(y[static_cast<std::size_t>(r)])].push_back(r);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  Index offset = 0;
  for (int c = 0; c < num_classes; ++c) {
    auto& members = by_class[static_cast<std::size_t>(c)];
    if (members.empty()) continue;
    if (static_cast<Index>(members.size()) < folds) {
      throw Error("cross-validation: class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                  " rows, fewer than the " + std::to_string(folds) + " folds");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    shuffle_in_place(members, rng);
    // Continue dealing where the previous class stopped to balance fold sizes.
    for (std::size_t i = 0; i < members.size(); ++i) {
      out[static_cast<std::size_t>((offset + static_cast<Index>(i)) % folds)].push_back(members[i]);
    }
    offset += static_cast<Index>(members.size());
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

nlohmann::json CvResult::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : combos) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : c.folds) folds.push_back(f.to_json());
    auto summary = [](const MetricSummary& m) { return nlohmann::json{{"mean", m.mean}, {"std", m.std}}; };
    rows.push_back({{"params", c.params.to_json()},
                    {"accuracy", summary(c.accuracy)},
                    {"macro_precision", summary(c.macro_precision)},
                    {"macro_recall", summary(c.macro_recall)},
                    {"macro_f1", summary(c.macro_f1)},
                    {"folds", folds}});
  }
  return {{"best", best}, {"combos", rows}};
}

BaselineResult cross_validate_search(const MatrixXd& x, const ingest::LabelVector& labels,
                                     const ingest::SplitMasks& masks, const ForestSearchSpace& space,
                                     int n_combos, int folds, std::uint64_t seed) {
  const int k = static_cast<int>(labels.names.size());
  const Index n = x.rows();
  if (labels.size() != n || static_cast<Index>(masks.train.size()) != n) {
    throw Error("baseline: features, labels and masks disagree on the row count");
  }
  std::vector<Index> pool;
  for (Index i = 0; i < n; ++i) {
    if (masks.train[static_cast<std::size_t>(i)] || masks.val[static_cast<std::size_t>(i)]) pool.push_back(i);
  }
  const auto fold_rows = stratified_folds(labels.labels, pool, folds, k, derive_seed(seed, 0x464f4c44));
  const auto combos = sample_forest_params(space, n_combos, seed);

  BaselineResult out;
  for (std::size_t c = 0; c < combos.size(); ++c) {
    ComboResult result;
    result.params = combos[c];
    std::vector<double> acc, prec, rec, f1;
    for (int f = 0; f < folds; ++f) {
      std::vector<Index> fit_rows;
      for (int g = 0; g < folds; ++g) {
        if (g != f) fit_rows.insert(fit_rows.end(), fold_rows[static_cast<std::size_t>(g)].begin(),
                                    fold_rows[static_cast<std::size_t>(g)].end());
      }
      std::sort(fit_rows.begin(), fit_rows.end());
      const auto forest = RandomForest::fit(
          x, labels.labels, fit_rows, k, combos[c],
          derive_seed(seed, 0x10000 + static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(folds) + static_cast<std::uint64_t>(f)));
      const auto& held = fold_rows[static_cast<std::size_t>(f)];
      MatrixXd xh(static_cast<Index>(held.size()), x.cols());
      std::vector<int> yh;
      for (std::size_t i = 0; i < held.size(); ++i) {
        xh.row(static_cast<Index>(i)) = x.row(held[i]);
        yh.push_back(labels.labels[static_cast<std::size_t>(held[i])]);
      }
      auto report = metrics::evaluate(yh, forest.predict(xh), k, labels.names);
      acc.push_back(report.accuracy);
      prec.push_back(report.macro_precision);
      rec.push_back(report.macro_recall);
      f1.push_back(report.macro_f1);
      result.folds.push_back(std::move(report));
    }
    result.accuracy = summarize(acc);
    result.macro_precision = summarize(prec);
    result.macro_recall = summarize(rec);
    result.macro_f1 = summarize(f1);
    out.cv.combos.push_back(std::move(result));
    if (out.cv.combos.back().macro_f1.mean > out.cv.combos[static_cast<std::size_t>(out.cv.best)].macro_f1.mean) {
      out.cv.best = static_cast<int>(c);
    }
  }
  out.best_params = combos[static_cast<std::size_t>(out.cv.best)];
  out.model = RandomForest::fit(x, labels.labels, pool, k, out.best_params, derive_seed(seed, 0x20000));
  out.predictions = out.model.predict(x);
  out.test_report = metrics::evaluate_masked(labels.labels, out.predictions, masks.test, k, labels.names);
  return out;
}

}  // namespace stugraph::baseline
