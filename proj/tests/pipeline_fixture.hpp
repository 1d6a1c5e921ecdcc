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

#ifndef STUGRAPH_TESTS_PIPELINE_FIXTURE_HPP_
#define STUGRAPH_TESTS_PIPELINE_FIXTURE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "stugraph/ingest/ingest.hpp"
#include "stugraph/pipeline/io.hpp"
#include "stugraph/pipeline/pipeline.hpp"
#include "stugraph/pipeline/synthetic.hpp"

namespace stugraph::testing {

namespace fs = std::filesystem;

inline const fs::path& source_dir() {
  static const fs::path dir = STUGRAPH_SOURCE_DIR;
  return dir;
}

/// Fresh directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stugraph_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline fs::path write_synthetic(const fs::path& dir, Index rows, std::uint64_t seed) {
  pipeline::SyntheticOptions opt;
  opt.rows = rows;
  opt.seed = seed;
  const auto schema = ingest::Schema::load(source_dir() / "data/schema.json");
  const fs::path path = dir / "data.csv";
  pipeline::write_text(path, pipeline::synthesize_dataset(schema, opt));
  return path;
}

/// Small search and baseline budgets so an end-to-end run takes seconds.
inline void shrink_budget(pipeline::RunConfig& c) {
  c.trials = 2;
  c.search.max_epochs = 25;
  c.search.hidden_max = 32;
  c.forest_combos = 2;
  c.forest_folds = 3;
  c.forest.trees_min = 5;
  c.forest.trees_max = 10;
  c.reduction.umap.n_epochs = 50;
}

/// Output path -> blob id for every file in a run directory except the
/// manifest, whose stage timings differ between runs.
inline std::map<std::string, std::string> report_hashes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    out[e.path().filename().string()] = pipeline::file_blob_sha1(e.path());
  }
  return out;
}

}  // namespace stugraph::testing

#endif  // STUGRAPH_TESTS_PIPELINE_FIXTURE_HPP_
