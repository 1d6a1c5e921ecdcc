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

#include "stugraph/ingest/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stugraph::ingest {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Splits one record; double quotes group a field and "" escapes a quote.
std::vector<std::string> split_record(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string& cell, const std::string& column, std::size_t row) {
  const std::string t = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error("column '" + column + "' row " + std::to_string(row) + ": '" + cell +
                "' is not a number");
  }
  return value;
}

double parse_boolean(const std::string& cell, const std::string& column, std::size_t row) {
  const std::string t = lower(trim(cell));
  if (t == "1" || t == "true" || t == "yes") return 1.0;
  if (t == "0" || t == "false" || t == "no") return 0.0;
  throw Error("column '" + column + "' row " + std::to_string(row) + ": '" + cell +
              "' is not a boolean");
}

ColumnKind parse_kind(const std::string& name) {
  if (name == "categorical") return ColumnKind::kCategorical;
  if (name == "continuous") return ColumnKind::kContinuous;
  if (name == "boolean") return ColumnKind::kBoolean;
  if (name == "target") return ColumnKind::kTarget;
  throw Error("unknown column kind '" + name + "'");
}

}  // namespace

std::size_t RawTable::column_index(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw Error("no column named '" + name + "'");
  return static_cast<std::size_t>(it - column_names.begin());
}

RawTable parse_raw(const std::string& text, char delimiter) {
  if (trim(text).empty()) throw Error("empty input");
  std::istringstream in(text);
  std::string line;
  RawTable table;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      table.column_names = split_record(line, delimiter);
      continue;
    }
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    auto cells = split_record(line, delimiter);
    if (cells.size() != table.column_names.size()) {
      throw Error("ragged row at line " + std::to_string(line_no) + ": expected " +
                  std::to_string(table.column_names.size()) + " cells, found " +
                  std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  std::set<std::string> seen;
  for (const auto& name : table.column_names) {
    if (!seen.insert(repair_header(name)).second) {
      throw Error("duplicate column name '" + name + "'");
    }
  }
  return table;
}

RawTable load_raw(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_raw(buffer.str(), delimiter);
}

std::vector<std::size_t> audit_missing(const RawTable& raw) {
  std::vector<std::size_t> counts(raw.column_names.size(), 0);
  for (const auto& row : raw.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (trim(row[c]).empty()) ++counts[c];
    }
  }
  return counts;
}

const std::map<std::string, std::string>& header_repairs() {
  static const std::map<std::string, std::string> repairs{
      {"Nacionality", "Nationality"},
      {"Daytime/evening attendance\t", "Daytime attendance"},
  };
  return repairs;
}

std::string repair_header(const std::string& name) {
  const auto& repairs = header_repairs();
  if (const auto it = repairs.find(name); it != repairs.end()) return it->second;
  return name;
}

std::string Schema::target_column() const {
  for (const auto& [name, spec] : columns) {
    if (spec.kind == ColumnKind::kTarget) return name;
  }
  throw Error("schema declares no target column");
}

Index Schema::output_width() const {
  Index width = 0;
  for (const auto& [name, spec] : columns) {
    switch (spec.kind) {
      case ColumnKind::kCategorical:
        width += static_cast<Index>(spec.categories.size());
        break;
      case ColumnKind::kContinuous:
      case ColumnKind::kBoolean:
        ++width;
        break;
      case ColumnKind::kTarget:
        break;
    }
  }
  return width;
}

Schema Schema::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.contains("columns") || !doc["columns"].is_object()) {
    throw Error("schema must contain a \"columns\" object");
  }
  Schema schema;
  for (const auto& [name, entry] : doc["columns"].items()) {
    ColumnSpec spec;
    if (entry.is_string()) {
      spec.kind = parse_kind(entry.get<std::string>());
    } else {
      spec.kind = parse_kind(entry.at("kind").get<std::string>());
      if (entry.contains("categories")) {
        for (const auto& c : entry["categories"]) {
          spec.categories.push_back(c.is_string() ? c.get<std::string>() : c.dump());
        }
      }
    }
    if (spec.kind == ColumnKind::kCategorical) {
      if (spec.categories.empty()) {
        throw Error("categorical column '" + name + "' declares no categories");
      }
      std::sort(spec.categories.begin(), spec.categories.end());
      if (std::adjacent_find(spec.categories.begin(), spec.categories.end()) !=
          spec.categories.end()) {
        throw Error("categorical column '" + name + "' declares a category twice");
      }
    }
    schema.columns.emplace(name, std::move(spec));
  }
  if (doc.contains("target")) {
    const auto target = doc["target"].get<std::string>();
    schema.columns[target].kind = ColumnKind::kTarget;
  }
  schema.target_column();
  return schema;
}

Schema Schema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

FeatureMatrix preprocess(const RawTable& raw, const Schema& schema) {
  const auto missing = audit_missing(raw);
  for (std::size_t c = 0; c < missing.size(); ++c) {
    if (missing[c] != 0) {
      throw Error("column '" + raw.column_names[c] + "' has " + std::to_string(missing[c]) +
                  " missing cells; imputation is not supported");
    }
  }

  std::vector<std::string> repaired;
  repaired.reserve(raw.column_names.size());
  for (const auto& name : raw.column_names) repaired.push_back(repair_header(name));
  for (const auto& [name, spec] : schema.columns) {
    if (std::find(repaired.begin(), repaired.end(), name) == repaired.end()) {
      throw Error("schema column '" + name + "' is not present in the input");
    }
  }

  const Index n = raw.num_rows();
  FeatureMatrix out;
  out.values.resize(n, schema.output_width());
  out.values.setZero();
  Index col = 0;
  for (std::size_t c = 0; c < repaired.size(); ++c) {
    const auto it = schema.columns.find(repaired[c]);
    if (it == schema.columns.end()) {
      throw Error("input column '" + repaired[c] + "' is not declared in the schema");
    }
    const auto& name = it->first;
    const auto& spec = it->second;
    switch (spec.kind) {
      case ColumnKind::kTarget:
        break;
      case ColumnKind::kBoolean:
        for (Index r = 0; r < n; ++r) {
          out.values(r, col) = parse_boolean(raw.rows[r][c], name, static_cast<std::size_t>(r));
        }
        out.feature_names.push_back(name);
        out.column_kinds.push_back(FeatureKind::kOneHot);
        ++col;
        break;
      case ColumnKind::kContinuous: {
        VectorXd v(n);
        for (Index r = 0; r < n; ++r) {
          v(r) = parse_double(raw.rows[r][c], name, static_cast<std::size_t>(r));
        }
        if (n > 0) {
          const double lo = v.minCoeff();
          const double hi = v.maxCoeff();
          if (hi > lo) {
            out.values.col(col) = (v.array() - lo) / (hi - lo);
          } else {
            out.warnings.push_back("continuous column '" + name +
                                   "' is constant; mapped to zeros");
          }
        }
        out.feature_names.push_back(name);
        out.column_kinds.push_back(FeatureKind::kScaledContinuous);
        ++col;
        break;
      }
      case ColumnKind::kCategorical: {
        const auto& cats = spec.categories;
        for (Index r = 0; r < n; ++r) {
          const std::string value = trim(raw.rows[r][c]);
          const auto pos = std::lower_bound(cats.begin(), cats.end(), value);
          if (pos == cats.end() || *pos != value) {
            throw Error("column '" + name + "' row " + std::to_string(r) + ": category '" +
                        value + "' is not declared in the schema");
          }
          out.values(r, col + (pos - cats.begin())) = 1.0;
        }
        out.one_hot_groups.emplace_back(col, col + static_cast<Index>(cats.size()));
        for (const auto& cat : cats) {
          out.feature_names.push_back(name + "_" + cat);
          out.column_kinds.push_back(FeatureKind::kOneHot);
        }
        col += static_cast<Index>(cats.size());
        break;
      }
    }
  }
  return out;
}

std::vector<std::size_t> LabelVector::counts() const {
  std::vector<std::size_t> c(names.size(), 0);
  for (int y : labels) ++c[static_cast<std::size_t>(y)];
  return c;
}

LabelVector encode_labels(const RawTable& raw, const std::string& target_column) {
  std::size_t c = raw.column_names.size();
  for (std::size_t i = 0; i < raw.column_names.size(); ++i) {
    if (repair_header(raw.column_names[i]) == target_column) c = i;
  }
  if (c == raw.column_names.size()) throw Error("no target column '" + target_column + "'");
  LabelVector out;
  out.labels.reserve(raw.rows.size());
  const auto& names = class_names();
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const std::string value = trim(raw.rows[r][c]);
    const auto it = std::find(names.begin(), names.end(), value);
    if (it == names.end()) {
      throw Error("unknown class label '" + value + "' at row " + std::to_string(r));
    }
    out.labels.push_back(static_cast<int>(it - names.begin()));
  }
  return out;
}

std::vector<Index> SplitMasks::indices(const std::vector<bool>& mask) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<std::size_t> apportion(const std::vector<std::size_t>& class_counts,
                                   std::size_t numerator, std::size_t denominator) {
  const std::size_t total = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  std::vector<std::size_t> take(class_counts.size(), 0);
  if (total == 0) return take;
  const std::size_t target = (total * numerator + denominator - 1) / denominator;
  std::size_t assigned = 0;
  std::vector<std::size_t> remainder(class_counts.size(), 0);
  for (std::size_t k = 0; k < class_counts.size(); ++k) {
    take[k] = class_counts[k] * target / total;
    remainder[k] = class_counts[k] * target % total;
    assigned += take[k];
  }
  std::vector<std::size_t> order(class_counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < target; ++i) {
    ++take[order[i]];
    ++assigned;
  }
  return take;
}

SplitMasks stratified_split(const LabelVector& labels, std::uint64_t seed) {
  const std::size_t n = labels.labels.size();
  const std::size_t k = labels.names.size();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels.labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= k) throw Error("label out of range");
    members[static_cast<std::size_t>(y)].push_back(i);
  }
  std::vector<std::size_t> counts(k);
  for (std::size_t c = 0; c < k; ++c) counts[c] = members[c].size();
  const auto test_take = apportion(counts, 20, 100);
  std::vector<std::size_t> rest(k);
  for (std::size_t c = 0; c < k; ++c) rest[c] = counts[c] - test_take[c];
  const auto val_take = apportion(rest, 25, 100);

  SplitMasks masks;
  masks.seed = seed;
  masks.train.assign(n, false);
  masks.val.assign(n, false);
  masks.test.assign(n, false);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    if (test_take[c] == 0 || val_take[c] == 0 || rest[c] == val_take[c]) {
      throw Error("class '" + labels.names[c] + "' has " + std::to_string(counts[c]) +
                  " members, too few to appear in train, validation and test");
    }
    Rng rng(derive_seed(seed, c));
    auto idx = members[c];
    shuffle_in_place(idx, rng);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (j < test_take[c]) {
        masks.test[idx[j]] = true;
      } else if (j < test_take[c] + val_take[c]) {
        masks.val[idx[j]] = true;
      } else {
        masks.train[idx[j]] = true;
      }
    }
  }
  return masks;
}

}  // namespace stugraph::ingest
