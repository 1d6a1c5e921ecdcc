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

#ifndef STUGRAPH_PIPELINE_IO_HPP_
#define STUGRAPH_PIPELINE_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "stugraph/cluster/assignment.hpp"
#include "stugraph/common.hpp"
#include "stugraph/ingest/ingest.hpp"

namespace stugraph::pipeline {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
nlohmann::json read_json(const fs::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const fs::path& path, const nlohmann::json& j);

/// Git blob id: SHA-1 of "blob <size>\0" followed by the bytes.
std::string git_blob_sha1(const std::string& bytes);
std::string file_blob_sha1(const fs::path& path);

/// Comma-separated matrix with a header row; values printed round-trip exact.
std::string format_matrix_csv(const MatrixXd& m, const std::vector<std::string>& header = {});
void write_matrix_csv(const fs::path& path, const MatrixXd& m, const std::vector<std::string>& header = {});
MatrixXd read_matrix_csv(const fs::path& path, std::vector<std::string>* header = nullptr);

/// "index,label,class" rows.
void write_labels_csv(const fs::path& path, const ingest::LabelVector& labels);
ingest::LabelVector read_labels_csv(const fs::path& path);

/// {"seed", "n", "train", "val", "test"} with index lists.
nlohmann::json masks_to_json(const ingest::SplitMasks& masks);
ingest::SplitMasks masks_from_json(const nlohmann::json& j, const std::string& source);
void write_masks_json(const fs::path& path, const ingest::SplitMasks& masks);
ingest::SplitMasks read_masks_json(const fs::path& path);

/// "index,cluster" rows, -1 for noise.
void write_assignment_csv(const fs::path& path, const cluster::ClusterAssignment& a);
cluster::ClusterAssignment read_assignment_csv(const fs::path& path);

/// "index,prediction" rows.
void write_predictions_csv(const fs::path& path, const std::vector<int>& predictions);
std::vector<int> read_predictions_csv(const fs::path& path);

}  // namespace stugraph::pipeline

#endif  // STUGRAPH_PIPELINE_IO_HPP_
