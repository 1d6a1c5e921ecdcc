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

#include "stugraph/pipeline/io.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stugraph::pipeline {
namespace {

Error format_error(const fs::path& path, std::size_t line, const std::string& expected) {
  return Error(path.string() + ":" + std::to_string(line) + ": malformed file, expected " + expected);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno == 0;
}

bool parse_int(const std::string& s, long long& v) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

// Reads "index,<int>[,...]" rows with a fixed header; values in column 1.
std::vector<long long> read_indexed_ints(const fs::path& path, const std::string& header) {
  const auto lines = read_lines(path);
  const std::string expected = "a '" + header + "' header then one row per index";
  if (lines.empty() || lines[0] != header) throw format_error(path, 1, expected);
  std::vector<long long> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_commas(lines[i]);
    long long index = 0;
    long long value = 0;
    if (cells.size() < 2 || !parse_int(cells[0], index) || !parse_int(cells[1], value) ||
        index != static_cast<long long>(i - 1)) {
      throw format_error(path, i + 1, expected);
    }
    out.push_back(value);
  }
  return out;
}

std::string sha1_hex(const std::string& bytes) {
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 15]);
  }
  return out;
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": malformed file, expected JSON (" + e.what() + ")");
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

std::string git_blob_sha1(const std::string& bytes) {
  return sha1_hex("blob " + std::to_string(bytes.size()) + std::string(1, '\0') + bytes);
}

std::string file_blob_sha1(const fs::path& path) { return git_blob_sha1(read_text(path)); }

std::string format_matrix_csv(const MatrixXd& m, const std::vector<std::string>& header) {
  std::string out;
  std::vector<std::string> names = header;
  if (names.empty()) {
    for (Index j = 0; j < m.cols(); ++j) names.push_back("c" + std::to_string(j));
  }
  if (static_cast<Index>(names.size()) != m.cols()) throw Error("matrix csv: header width differs from matrix");
  for (std::size_t j = 0; j < names.size(); ++j) out += (j ? "," : "") + names[j];
  out += '\n';
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const fs::path& path, const MatrixXd& m, const std::vector<std::string>& header) {
  write_text(path, format_matrix_csv(m, header));
}

MatrixXd read_matrix_csv(const fs::path& path, std::vector<std::string>* header) {
  const auto lines = read_lines(path);
  const std::string expected = "a header row then rows of numbers with equal width";
  if (lines.empty()) throw format_error(path, 1, expected);
  const auto names = split_commas(lines[0]);
  MatrixXd m(static_cast<Index>(lines.size() - 1), static_cast<Index>(names.size()));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_commas(lines[i]);
    if (cells.size() != names.size()) throw format_error(path, i + 1, expected);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0.0;
      if (!parse_double(cells[j], v)) throw format_error(path, i + 1, expected);
      m(static_cast<Index>(i - 1), static_cast<Index>(j)) = v;
    }
  }
  if (header != nullptr) *header = names;
  return m;
}

void write_labels_csv(const fs::path& path, const ingest::LabelVector& labels) {
  std::string out = "index,label,class\n";
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const int l = labels.labels[i];
    out += std::to_string(i) + "," + std::to_string(l) + "," + labels.names[static_cast<std::size_t>(l)] + "\n";
  }
  write_text(path, out);
}

ingest::LabelVector read_labels_csv(const fs::path& path) {
  ingest::LabelVector out;
  for (long long v : read_indexed_ints(path, "index,label,class")) {
    if (v < 0 || v >= static_cast<long long>(out.names.size())) {
      throw Error(path.string() + ": label " + std::to_string(v) + " out of range");
    }
    out.labels.push_back(static_cast<int>(v));
  }
  return out;
}

nlohmann::json masks_to_json(const ingest::SplitMasks& masks) {
  return {{"seed", masks.seed},
          {"n", masks.train.size()},
          {"train", ingest::SplitMasks::indices(masks.train)},
          {"val", ingest::SplitMasks::indices(masks.val)},
          {"test", ingest::SplitMasks::indices(masks.test)}};
}

ingest::SplitMasks masks_from_json(const nlohmann::json& j, const std::string& source) {
  const std::string expected = source + ": malformed file, expected {seed, n, train, val, test} with disjoint index lists";
  try {
    ingest::SplitMasks m;
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto n = j.at("n").get<std::size_t>();
    m.train.assign(n, false);
    m.val.assign(n, false);
    m.test.assign(n, false);
    for (const auto& [key, mask] : {std::pair{"train", &m.train}, {"val", &m.val}, {"test", &m.test}}) {
      for (const auto i : j.at(key).get<std::vector<std::size_t>>()) {
        if (i >= n || m.train[i] || m.val[i] || m.test[i]) throw Error(expected);
        (*mask)[i] = true;
      }
    }
    return m;
  } catch (const nlohmann::json::exception&) {
    throw Error(expected);
  }
}

void write_masks_json(const fs::path& path, const ingest::SplitMasks& masks) {
  write_json(path, masks_to_json(masks));
}

ingest::SplitMasks read_masks_json(const fs::path& path) {
  return masks_from_json(read_json(path), path.string());
}

void write_assignment_csv(const fs::path& path, const cluster::ClusterAssignment& a) {
  std::string out = "index,cluster\n";
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(a.labels[i]) + "\n";
  }
  write_text(path, out);
}

cluster::ClusterAssignment read_assignment_csv(const fs::path& path) {
  cluster::ClusterAssignment a;
  int max_label = -1;
  for (long long v : read_indexed_ints(path, "index,cluster")) {
    if (v < -1) throw Error(path.string() + ": cluster id " + std::to_string(v) + " is invalid");
    a.labels.push_back(static_cast<int>(v));
    max_label = std::max(max_label, static_cast<int>(v));
  }
  a.num_clusters = max_label + 1;
  return a;
}

void write_predictions_csv(const fs::path& path, const std::vector<int>& predictions) {
  std::string out = "index,prediction\n";
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(predictions[i]) + "\n";
  }
  write_text(path, out);
}

std::vector<int> read_predictions_csv(const fs::path& path) {
  std::vector<int> out;
  for (long long v : read_indexed_ints(path, "index,prediction")) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace stugraph::pipeline
