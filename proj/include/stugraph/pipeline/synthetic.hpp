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

#ifndef STUGRAPH_PIPELINE_SYNTHETIC_HPP_
#define STUGRAPH_PIPELINE_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stugraph/common.hpp"
#include "stugraph/ingest/ingest.hpp"

namespace stugraph::pipeline {

/// Raw header of the UCI student-outcome table in file order, including the
/// upstream spellings that ingest repairs.
const std::vector<std::string>& uci_header();

struct SyntheticOptions {
  Index rows = 4424;
  std::uint64_t seed = 7;
  /// Class totals are apportioned from these in Dropout/Enrolled/Graduate order.
  std::vector<std::size_t> class_counts{1421, 794, 2209};
  /// Spread of the per-row latent score around its class center.
  double noise = 0.8;
};

/// ';'-separated stand-in with the UCI header and value domains drawn from
/// `schema`. Features depend on a class-correlated latent score so that the
/// pipeline has signal to learn. Not a substitute for the real data.
std::string synthesize_dataset(const ingest::Schema& schema, const SyntheticOptions& options);

}  // namespace stugraph::pipeline

#endif  // STUGRAPH_PIPELINE_SYNTHETIC_HPP_
