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

#include "stugraph/metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stugraph/ingest/ingest.hpp"

namespace stugraph::metrics {
namespace {

double ratio(Index num, Index den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : k_(num_classes), counts_(static_cast<std::size_t>(num_classes * num_classes), 0) {
  if (num_classes < 1) throw Error("confusion matrix: need at least one class");
}

void ConfusionMatrix::add(int truth, int predicted) {
  for (int v : {truth, predicted}) {
    if (v < 0 || v >= k_) {
      throw Error("metrics: label " + std::to_string(v) + " outside [0, " + std::to_string(k_) + ")");
    }
  }
  ++counts_[static_cast<std::size_t>(truth * k_ + predicted)];
  ++total_;
}

ConfusionMatrix ConfusionMatrix::from_labels(const std::vector<int>& y_true,
                                             const std::vector<int>& y_pred, int num_classes) {
  if (y_true.size() != y_pred.size()) {
    throw Error("metrics: " + std::to_string(y_true.size()) + " true labels vs " +
                std::to_string(y_pred.size()) + " predictions");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) cm.add(y_true[i], y_pred[i]);
  return cm;
}

Index ConfusionMatrix::fp(int c) const {
  Index col = 0;
  for (int t = 0; t < k_; ++t) col += at(t, c);
  return col - tp(c);
}

Index ConfusionMatrix::fn(int c) const {
  Index row = 0;
  for (int p = 0; p < k_; ++p) row += at(c, p);
  return row - tp(c);
}

nlohmann::json ConfusionMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int t = 0; t < k_; ++t) {
    std::vector<Index> row;
    for (int p = 0; p < k_; ++p) row.push_back(at(t, p));
    rows.push_back(row);
  }
  return rows;
}

bool MetricsReport::any_undefined() const {
  return std::any_of(per_class.begin(), per_class.end(), [](const ClassMetrics& c) {
    return c.precision_undefined || c.recall_undefined || c.f1_undefined;
  });
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const auto& m = per_class[c];
    classes.push_back({{"class", c < class_names.size() ? class_names[c] : std::to_string(c)},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"support", m.support},
                       {"precision_undefined", m.precision_undefined},
                       {"recall_undefined", m.recall_undefined},
                       {"f1_undefined", m.f1_undefined}});
  }
  return {{"accuracy", accuracy},     {"macro_precision", macro_precision},
          {"macro_recall", macro_recall}, {"macro_f1", macro_f1},
          {"per_class", classes},     {"confusion", confusion.to_json()},
          {"total", confusion.total()}};
}

MetricsReport evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred, int num_classes,
                       std::vector<std::string> class_names) {
  if (y_true.empty()) throw Error("metrics: nothing to evaluate");
  MetricsReport r;
  r.confusion = ConfusionMatrix::from_labels(y_true, y_pred, num_classes);
  const auto& cm = r.confusion;
  if (class_names.empty() && num_classes == 3) class_names = ingest::class_names();
  r.class_names = std::move(class_names);
  Index correct = 0;
  for (int c = 0; c < num_classes; ++c) {
    ClassMetrics m;
    const Index tp = cm.tp(c);
    correct += tp;
    m.support = tp + cm.fn(c);
    m.precision = ratio(tp, tp + cm.fp(c), m.precision_undefined);
    m.recall = ratio(tp, tp + cm.fn(c), m.recall_undefined);
    if (m.precision + m.recall > 0.0) {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
      m.f1_undefined = true;
    }
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    r.per_class.push_back(m);
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(cm.total());
  r.macro_precision /= num_classes;
  r.macro_recall /= num_classes;
  r.macro_f1 /= num_classes;
  return r;
}

MetricsReport evaluate_masked(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                              const std::vector<bool>& mask, int num_classes,
                              std::vector<std::string> class_names) {
  if (y_true.size() != mask.size() || y_pred.size() != mask.size()) {
    throw Error("metrics: labels, predictions and mask differ in length");
  }
  std::vector<int> t;
  std::vector<int> p;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    t.push_back(y_true[i]);
    p.push_back(y_pred[i]);
  }
  return evaluate(t, p, num_classes, std::move(class_names));
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
  return buf;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream out;
  out << "model,accuracy,precision,recall,f1,source\n";
  for (const auto& r : rows) {
    out << '"' << r.model << "\"," << format_percent(r.accuracy) << ',' << format_percent(r.precision)
        << ',' << format_percent(r.recall) << ',' << format_percent(r.f1) << ",\"" << r.source << "\"\n";
  }
  return out.str();
}

std::string ComparisonTable::to_text() const {
  const std::vector<std::string> header{"Model", "Accuracy", "Precision", "Recall", "F1", "Source"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    cells.push_back({r.model, format_percent(r.accuracy), format_percent(r.precision),
                     format_percent(r.recall), format_percent(r.f1), r.source});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      const auto& s = cells[i][c];
      const std::string pad(width[c] - s.size(), ' ');
      // Left-align text columns, right-align numbers.
      if (c == 0 || c + 1 == cells[i].size()) {
        out << s << (c + 1 == cells[i].size() ? "" : pad);
      } else {
        out << pad << s;
      }
      if (c + 1 != cells[i].size()) out << "  ";
    }
    out << '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

nlohmann::json ComparisonTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"model", r.model}, {"accuracy", r.accuracy}, {"precision", r.precision},
                   {"recall", r.recall}, {"f1", r.f1}, {"source", r.source}});
  }
  return out;
}

std::vector<ComparisonRow> reference_rows(const nlohmann::json& reference) {
  std::vector<ComparisonRow> out;
  for (const auto& r : reference.at("overall")) {
    out.push_back({r.at("model").get<std::string>(), r.at("accuracy").get<double>(),
                   r.at("precision").get<double>(), r.at("recall").get<double>(),
                   r.at("f1").get<double>(), kReferenceTag});
  }
  return out;
}

std::vector<ComparisonRow> load_reference_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open reference results " + path.string());
  try {
    return reference_rows(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": malformed reference results: " + e.what());
  }
}

ComparisonTable compare_report(const std::vector<std::pair<std::string, MetricsReport>>& reports,
                               const std::vector<ComparisonRow>& reference) {
  if (reports.empty()) throw Error("report: no model reports given");
  ComparisonTable t;
  for (const auto& [name, r] : reports) {
    t.rows.push_back({name, r.accuracy, r.macro_precision, r.macro_recall, r.macro_f1, "this run"});
  }
  t.rows.insert(t.rows.end(), reference.begin(), reference.end());
  return t;
}

}  // namespace stugraph::metrics
