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

#include "stugraph/pipeline/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace stugraph::pipeline {
namespace {

struct Range {
  double lo;
  double hi;
  int decimals;
  double loading;
};

const std::map<std::string, Range>& continuous_ranges() {
  static const std::map<std::string, Range> ranges{
      {"Application order", {0, 9, 0, -0.2}},
      {"Previous qualification (grade)", {95, 190, 1, 0.3}},
      {"Admission grade", {95, 190, 1, 0.4}},
      {"Age at enrollment", {17, 70, 0, -0.3}},
      {"Curricular units 1st sem (credited)", {0, 20, 0, 0.1}},
      {"Curricular units 1st sem (enrolled)", {0, 26, 0, 0.2}},
      {"Curricular units 1st sem (evaluations)", {0, 45, 0, 0.3}},
      {"Curricular units 1st sem (approved)", {0, 26, 0, 0.9}},
      {"Curricular units 1st sem (grade)", {0, 18.875, 6, 0.8}},
      {"Curricular units 1st sem (without evaluations)", {0, 12, 0, -0.2}},
      {"Curricular units 2nd sem (credited)", {0, 19, 0, 0.1}},
      {"Curricular units 2nd sem (enrolled)", {0, 23, 0, 0.2}},
      {"Curricular units 2nd sem (evaluations)", {0, 33, 0, 0.3}},
      {"Curricular units 2nd sem (approved)", {0, 20, 0, 1.0}},
      {"Curricular units 2nd sem (grade)", {0, 18.571, 6, 0.9}},
      {"Curricular units 2nd sem (without evaluations)", {0, 12, 0, -0.2}},
      {"Unemployment rate", {7.6, 16.2, 1, 0.0}},
      {"Inflation rate", {-0.8, 3.7, 1, 0.0}},
      {"GDP", {-4.06, 3.51, 2, 0.0}},
  };
  return ranges;
}

double normal(Rng& rng) {
  const double u1 = std::max(uniform01(rng), 1e-300);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::string format_value(double v, int decimals) {
  char buf[64];
  if (decimals == 0) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(v)));
  } else {
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  }
  return buf;
}

}  // namespace

const std::vector<std::string>& uci_header() {
  static const std::vector<std::string> header{
      "Marital status",
      "Application mode",
      "Application order",
      "Course",
      "Daytime/evening attendance\t",
      "Previous qualification",
      "Previous qualification (grade)",
      "Nacionality",
      "Mother's qualification",
      "Father's qualification",
      "Mother's occupation",
      "Father's occupation",
      "Admission grade",
      "Displaced",
      "Educational special needs",
      "Debtor",
      "Tuition fees up to date",
      "Gender",
      "Scholarship holder",
      "Age at enrollment",
      "International",
      "Curricular units 1st sem (credited)",
      "Curricular units 1st sem (enrolled)",
      "Curricular units 1st sem (evaluations)",
      "Curricular units 1st sem (approved)",
      "Curricular units 1st sem (grade)",
      "Curricular units 1st sem (without evaluations)",
      "Curricular units 2nd sem (credited)",
      "Curricular units 2nd sem (enrolled)",
      "Curricular units 2nd sem (evaluations)",
      "Curricular units 2nd sem (approved)",
      "Curricular units 2nd sem (grade)",
      "Curricular units 2nd sem (without evaluations)",
      "Unemployment rate",
      "Inflation rate",
      "GDP",
      "Target",
  };
  return header;
}

std::string synthesize_dataset(const ingest::Schema& schema, const SyntheticOptions& options) {
  if (options.rows < 1) throw Error("synthetic data: rows must be positive");
  const auto total = std::accumulate(options.class_counts.begin(), options.class_counts.end(), std::size_t{0});
  const auto per_class = ingest::apportion(options.class_counts, static_cast<std::size_t>(options.rows), total);
  std::vector<int> classes;
  for (std::size_t c = 0; c < per_class.size(); ++c) classes.insert(classes.end(), per_class[c], static_cast<int>(c));
  Rng rng(derive_seed(options.seed, 0x53594e54));
  shuffle_in_place(classes, rng);

  const auto& names = ingest::class_names();
  const auto& ranges = continuous_ranges();
  std::string out;
  const auto& header = uci_header();
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? ";" : "") + header[j];
  out += '\n';
  for (int c : classes) {
    // Dropout -1, Enrolled 0, Graduate +1.
    const double z = static_cast<double>(c) - 1.0 + options.noise * normal(rng);
    for (std::size_t j = 0; j < header.size(); ++j) {
      const std::string name = ingest::repair_header(header[j]);
      const auto it = schema.columns.find(name);
      if (it == schema.columns.end()) throw Error("synthetic data: schema lacks column '" + name + "'");
      std::string cell;
      switch (it->second.kind) {
        case ingest::ColumnKind::kTarget:
          cell = names[static_cast<std::size_t>(c)];
          break;
        case ingest::ColumnKind::kCategorical: {
          const auto& cats = it->second.categories;
          const auto m = static_cast<double>(cats.size());
          std::size_t pick = uniform_index(rng, cats.size());
          if (uniform01(rng) < 0.5) {
            const double pos = std::clamp((z + 2.0) / 4.0, 0.0, 0.999999);
            pick = static_cast<std::size_t>(pos * m);
          }
          cell = cats[pick];
          break;
        }
        case ingest::ColumnKind::kBoolean: {
          double logit = -2.0;
          if (name == "Tuition fees up to date") logit = 1.5 + 1.2 * z;
          if (name == "Scholarship holder") logit = -1.2 + 0.8 * z;
          if (name == "Debtor") logit = -2.0 - 0.8 * z;
          cell = uniform01(rng) < sigmoid(logit) ? "1" : "0";
          break;
        }
        case ingest::ColumnKind::kContinuous: {
          const auto r = ranges.find(name);
          const Range range = r != ranges.end() ? r->second : Range{0.0, 1.0, 3, 0.0};
          const double span = range.hi - range.lo;
          const double mid = range.lo + 0.5 * span;
          const double v = mid + range.loading * z * span / 4.0 + normal(rng) * span / 8.0;
          cell = format_value(std::clamp(v, range.lo, range.hi), range.decimals);
          break;
        }
      }
      out += (j ? ";" : "") + cell;
    }
    out += '\n';
  }
  return out;
}

}  // namespace stugraph::pipeline
