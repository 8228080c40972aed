//
// Copyright 2026 The Pillar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PILLAR_RESULTS_HPP_
#define PILLAR_RESULTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace pillar {

inline constexpr const char* kResultsSchemaVersion = "pillar-results/1";

// One sweep-cell outcome. Floats are serialized at 6 significant digits;
// epsilon may be infinite (spelled "inf"). Failed cells carry the error in
// `status` (empty means success) with the numeric fields zeroed.
struct ResultRow {
  std::string dataset_id;
  std::string method;  // pillar | dpsgd-full | jl
  int k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  int n_labeled = 0;
  int n_public = 0;
  std::uint64_t seed = 0;
  std::string backend;
  std::string formula_variant;
  std::string budget_split;
  double learning_rate = 0.0;
  int steps = 0;
  int batch_size = 0;
  double test_error = 0.0;
  double train_error = 0.0;
  double wall_time_ms = 0.0;
  double sigma_used = 0.0;
  double xi_hat = 0.0;
  double delta_k_hat = 0.0;
  std::string status;
};

enum class ResultFormat { kCsv, kJsonLines };

ResultFormat result_format_from_string(const std::string& name);

// Writes rows with a schema-version header line and a stable column order.
// Re-reading yields the same rows at the declared precision. Throws IoError.
void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                   ResultFormat format);

std::vector<ResultRow> read_results(const std::string& path,
                                    ResultFormat format);

}  // namespace pillar

#endif  // PILLAR_RESULTS_HPP_
