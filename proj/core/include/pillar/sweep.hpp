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

#ifndef PILLAR_SWEEP_HPP_
#define PILLAR_SWEEP_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pillar/dataset.hpp"
#include "pillar/feature_io.hpp"
#include "pillar/optim.hpp"
#include "pillar/pipeline.hpp"
#include "pillar/results.hpp"

namespace pillar {

// Spelled "inf" in configs; routes the cell to the non-private baseline.
inline constexpr double kEpsilonInfinity =
    std::numeric_limits<double>::infinity();

struct GmmSourceConfig {
  int d = 50;
  double theta = 0.05;
  double sigma2 = 0.05;
  int pool = 4000;  // labelled pool drawn per seed
  bool random_orientation = false;
};

struct FileSourceConfig {
  std::string path;
  FeatureFormat format = FeatureFormat::kCsv;
  // One-vs-one reduction for multiclass files; ignored when the file is
  // already in {-1, +1}.
  int positive_class = 1;
  int negative_class = -1;
};

struct SweepConfig {
  std::string dataset_id;
  std::optional<GmmSourceConfig> gmm;
  std::optional<FileSourceConfig> file;

  // Grid axes; every combination is one cell.
  std::vector<int> ks;
  std::vector<double> epsilons;  // kEpsilonInfinity allowed
  std::vector<double> labeled_fractions = {1.0};
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods = {"pillar"};
  std::vector<double> learning_rates = {0.1};
  std::vector<int> steps_grid = {1000};
  std::vector<int> batch_sizes = {128};

  double public_fraction = 0.1;
  double test_fraction = 0.2;

  double delta = 1e-5;
  PrivacyMode private_backend = PrivacyMode::kRdpDpSgd;
  BudgetSplit budget_split;
  FormulaVariant formula_variant = FormulaVariant::kPaperLiteral;
  double clip_norm = 1.0;

  double gamma0 = 0.5;
  double xi0 = 0.0;
  double eta = 0.0;
  double delta_k = 0.0;
  double beta = 0.05;
  bool estimate_params = false;

  int gd_steps = 2000;
  double gd_learning_rate = 0.5;

  std::string output_path;
  ResultFormat output_format = ResultFormat::kCsv;
  // Wall-time is only recorded when asked for: timed rows are not
  // byte-reproducible across runs, untimed sweeps are.
  bool record_timing = false;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
  static SweepConfig from_json_text(const std::string& text);
  static SweepConfig from_file(const std::string& path);
};

// Runs every grid cell and returns one row per cell, ordered by cell index
// regardless of worker scheduling. Rows are deterministic given the master
// seed: per-seed data streams and per-cell fit streams are derived by index,
// so same-seed cells share their dataset and split. Cell failures land in
// the row's status field and never abort the sweep. Throws ConfigError only.
std::vector<ResultRow> run_sweep(const SweepConfig& config,
                                 std::uint64_t master_seed);

// Stratified holdout: per label, a seeded fraction goes to the second part.
std::pair<LabeledDataset, LabeledDataset> stratified_holdout(
    const LabeledDataset& data, double holdout_fraction, Rng& rng);

}  // namespace pillar

#endif  // PILLAR_SWEEP_HPP_
