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

#include "pillar/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pillar/baselines.hpp"
#include "pillar/mechanisms.hpp"
#include "pillar/spectral.hpp"
#include "pillar/synthdata.hpp"

namespace pillar {
namespace {

using nlohmann::json;

struct Cell {
  std::size_t index = 0;       // global row index
  std::size_t seed_pos = 0;    // position in config.seeds
  std::size_t ordinal = 0;     // cell position within its seed block
  int k = 0;
  double epsilon = 0.0;
  double labeled_fraction = 1.0;
  std::string method;
  double learning_rate = 0.0;
  int steps = 0;
  int batch_size = 0;
};

double parse_epsilon(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return kEpsilonInfinity;
    throw ConfigError("epsilon string must be 'inf'");
  }
  return value.get<double>();
}

// The shared per-seed inputs every cell of that seed sees.
struct SeedData {
  LabeledDataset train;      // full private training pool, pre-shuffled
  LabeledDataset test;
  UnlabeledDataset public_part;
  std::optional<Eigen::VectorXd> reference_separator;
};

SeedData prepare_seed_data(const SweepConfig& config, Rng master,
                           std::uint64_t seed_value) {
  Rng seed_stream = master.child(seed_value);
  Rng data_rng = seed_stream.child(0);
  Rng split_rng = seed_stream.child(1);

  LabeledDataset pool;
  SeedData out;
  if (config.gmm.has_value()) {
    const auto& g = *config.gmm;
    GmmSpec spec = g.random_orientation
                       ? GmmSpec::random_rotated(g.d, g.theta, g.sigma2,
                                                 data_rng)
                       : GmmSpec::axis_aligned(g.d, g.theta, g.sigma2);
    pool = sample_gmm(spec, g.pool, data_rng).data;
    out.reference_separator = spec.mu;
  } else {
    const auto& f = *config.file;
    const FeatureData features = load_features(f.path, f.format);
    const std::vector<int> labels = distinct_labels(features);
    if (labels.size() == 2 && labels[0] == -1 && labels[1] == 1) {
      pool = features.to_labeled();
    } else {
      pool = reduce_one_vs_one(features, f.positive_class, f.negative_class);
    }
  }

  auto [public_part, private_part] =
      split_public_private(pool, config.public_fraction, split_rng);
  auto [train, test] =
      stratified_holdout(private_part, config.test_fraction, split_rng);
  out.public_part = std::move(public_part);
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

LabeledDataset take_prefix(const LabeledDataset& data, double fraction) {
  const auto n = static_cast<Eigen::Index>(
      std::floor(fraction * static_cast<double>(data.size())));
  if (n < 1) throw ConfigError("labeled fraction leaves no training data");
  if (n >= data.size()) return data;
  LabeledDataset out;
  out.points = data.points.topRows(n);
  out.labels.assign(data.labels.begin(), data.labels.begin() + n);
  return out;
}

ResultRow run_cell(const SweepConfig& config, const Cell& cell,
                   const SeedData& data, std::uint64_t seed_value,
                   Rng master) {
  ResultRow row;
  row.dataset_id = config.dataset_id;
  row.method = cell.method;
  row.k = cell.k;
  row.epsilon = cell.epsilon;
  row.delta = config.delta;
  row.seed = seed_value;
  row.learning_rate = cell.learning_rate;
  row.steps = cell.steps;
  row.batch_size = cell.batch_size;
  row.budget_split = config.budget_split.to_string();
  row.formula_variant = to_string(config.formula_variant);

  const bool non_private = std::isinf(cell.epsilon);
  row.backend = non_private ? to_string(PrivacyMode::kNonPrivate)
                            : to_string(config.private_backend);

  const LabeledDataset train = take_prefix(data.train, cell.labeled_fraction);
  row.n_labeled = static_cast<int>(train.size());
  row.n_public = static_cast<int>(data.public_part.size());

  Rng fit_rng = master.child(seed_value).child(2 + cell.ordinal);

  PillarParams params;
  params.k = cell.k;
  params.gamma0 = config.gamma0;
  params.xi0 = config.xi0;
  params.eta = config.eta;
  params.delta_k = config.delta_k;
  params.beta = config.beta;
  params.budget.epsilon = non_private ? 0.0 : cell.epsilon;
  params.budget.delta = config.delta;
  params.budget.mode =
      non_private ? PrivacyMode::kNonPrivate : config.private_backend;
  params.budget_split = config.budget_split;
  params.formula_variant = config.formula_variant;
  params.dpsgd.steps = cell.steps;
  params.dpsgd.learning_rate = cell.learning_rate;
  params.dpsgd.batch_size = cell.batch_size;
  params.dpsgd.clip_norm = config.clip_norm;
  params.gd_steps = config.gd_steps;
  params.gd_learning_rate = config.gd_learning_rate;
  params.reference_separator = data.reference_separator;

  if (config.estimate_params) {
    const Eigen::MatrixXd cov = empirical_covariance(data.public_part, false);
    const ProjectionBasis basis = top_k_eigenbasis(cov, cell.k);
    const EstimatedParams estimated = estimate_pillar_params(
        train, basis, config.gd_steps, config.gd_learning_rate);
    params.gamma0 = estimated.gamma0;
    params.xi0 = estimated.xi0;
  }

  const double zeta =
      params.eta > 0.0 ? compute_zeta_shift(params.gamma0, params.xi0,
                                            params.eta, params.delta_k)
                       : compute_zeta(params.gamma0, params.xi0);

  HalfspaceModel model;
  LabeledDataset eval_train = train;
  LabeledDataset eval_test = data.test;

  if (cell.method == "pillar") {
    PillarFit fit = pillar_fit(train, data.public_part, params, fit_rng);
    model = std::move(fit.model);
    row.sigma_used = fit.report.sigma_used;
    row.delta_k_hat = fit.report.delta_k_hat;
    row.xi_hat = fit.report.xi_hat.value_or(0.0);
  } else if (cell.method == "dpsgd-full" || cell.method == "jl") {
    if (cell.method == "jl") {
      // One shared projection for train and test: replay the same stream.
      Rng g_train = fit_rng.child(0);
      Rng g_test = fit_rng.child(0);
      eval_train = jl_project(train, cell.k, g_train);
      eval_test = jl_project(data.test, cell.k, g_test);
    }
    if (non_private) {
      model = gd_baseline(eval_train, zeta, config.gd_steps,
                          config.gd_learning_rate);
    } else if (config.private_backend == PrivacyMode::kTheoreticalNoisySgd) {
      ABaseOptions options;
      options.variant = config.formula_variant;
      NoisySgdReport report;
      model = a_noisy_sgd(eval_train, zeta, cell.epsilon, config.delta,
                          params.beta / 4.0, config.budget_split, fit_rng,
                          options, &report);
      row.sigma_used = report.sigma_squared;
    } else {
      SgdSchedule schedule = SgdSchedule::constant(
          cell.steps, cell.learning_rate,
          std::min<int>(cell.batch_size, static_cast<int>(eval_train.size())),
          config.clip_norm);
      const double rate = static_cast<double>(schedule.batch_size) /
                          static_cast<double>(eval_train.size());
      const double sigma = calibrate_dpsgd_sigma(cell.epsilon, config.delta,
                                                 schedule.steps, rate);
      model = dp_sgd(eval_train, LossKind::kScaledHinge, zeta, schedule, sigma,
                     fit_rng);
      row.sigma_used = sigma;
    }
  } else {
    throw ConfigError("unknown method '" + cell.method + "'");
  }

  row.train_error = evaluate(model, eval_train);
  row.test_error = evaluate(model, eval_test);
  return row;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> stratified_holdout(
    const LabeledDataset& data, double holdout_fraction, Rng& rng) {
  if (!(holdout_fraction >= 0.0) || holdout_fraction >= 1.0) {
    throw BadFractionError("holdout fraction must lie in [0, 1)");
  }
  std::map<int, std::vector<std::size_t>> by_label;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    by_label[data.labels[i]].push_back(static_cast<std::size_t>(i));
  }
  std::vector<std::size_t> keep_idx;
  std::vector<std::size_t> hold_idx;
  for (auto& [label, indices] : by_label) {
    rng.shuffle(indices);
    const auto n_hold = static_cast<std::size_t>(
        std::floor(holdout_fraction * static_cast<double>(indices.size())));
    for (std::size_t i = 0; i < indices.size(); ++i) {
      (i < n_hold ? hold_idx : keep_idx).push_back(indices[i]);
    }
  }
  // Keep ordering seeded rather than label-sorted.
  rng.shuffle(keep_idx);
  rng.shuffle(hold_idx);

  auto gather = [&data](const std::vector<std::size_t>& idx) {
    LabeledDataset out;
    out.points.resize(static_cast<Eigen::Index>(idx.size()), data.dim());
    out.labels.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.points.row(static_cast<Eigen::Index>(i)) =
          data.points.row(static_cast<Eigen::Index>(idx[i]));
      out.labels.push_back(data.labels[idx[i]]);
    }
    return out;
  };
  return {gather(keep_idx), gather(hold_idx)};
}

void SweepConfig::validate() const {
  if (gmm.has_value() == file.has_value()) {
    throw ConfigError("exactly one data source (gmm or file) is required");
  }
  if (ks.empty() || epsilons.empty() || seeds.empty() || methods.empty() ||
      labeled_fractions.empty() || learning_rates.empty() ||
      steps_grid.empty() || batch_sizes.empty()) {
    throw ConfigError("grid axes must be non-empty");
  }
  for (int k : ks) {
    if (k < 1) throw ConfigError("k values must be positive");
    if (gmm.has_value() && k > gmm->d) {
      throw ConfigError("k exceeds the data dimension");
    }
  }
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ConfigError("epsilon values must be positive");
  }
  for (double f : labeled_fractions) {
    if (!(f > 0.0) || f > 1.0) {
      throw ConfigError("labeled fractions must lie in (0, 1]");
    }
  }
  for (const std::string& m : methods) {
    if (m != "pillar" && m != "dpsgd-full" && m != "jl") {
      throw ConfigError("unknown method '" + m + "'");
    }
  }
  if (!(public_fraction > 0.0) || public_fraction >= 1.0) {
    throw ConfigError("public fraction must lie in (0, 1)");
  }
  if (!(test_fraction > 0.0) || test_fraction >= 1.0) {
    throw ConfigError("test fraction must lie in (0, 1)");
  }
  if (output_path.empty()) throw ConfigError("output path is required");
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  SweepConfig config;
  try {
    const json& data = root.at("data");
    const std::string source = data.at("source").get<std::string>();
    if (source == "gmm") {
      GmmSourceConfig g;
      g.d = data.at("d").get<int>();
      g.theta = data.at("theta").get<double>();
      g.sigma2 = data.at("sigma2").get<double>();
      g.pool = data.at("pool").get<int>();
      g.random_orientation = data.value("random_orientation", false);
      config.gmm = g;
      config.dataset_id = data.value("id", "gmm-d" + std::to_string(g.d));
    } else if (source == "file") {
      FileSourceConfig f;
      f.path = data.at("path").get<std::string>();
      f.format = data.contains("format")
                     ? feature_format_from_string(
                           data.at("format").get<std::string>())
                     : guess_feature_format(f.path);
      if (data.contains("classes")) {
        const auto classes = data.at("classes");
        f.positive_class = classes.at(0).get<int>();
        f.negative_class = classes.at(1).get<int>();
      }
      config.file = f;
      config.dataset_id = data.value("id", f.path);
    } else {
      throw ConfigError("data source must be 'gmm' or 'file'");
    }

    const json& grid = root.at("grid");
    config.ks = grid.at("k").get<std::vector<int>>();
    for (const json& eps : grid.at("epsilon")) {
      config.epsilons.push_back(parse_epsilon(eps));
    }
    config.seeds = grid.at("seeds").get<std::vector<std::uint64_t>>();
    if (grid.contains("labeled_fraction")) {
      config.labeled_fractions =
          grid.at("labeled_fraction").get<std::vector<double>>();
    }
    if (grid.contains("methods")) {
      config.methods = grid.at("methods").get<std::vector<std::string>>();
    }
    if (grid.contains("learning_rate")) {
      config.learning_rates =
          grid.at("learning_rate").get<std::vector<double>>();
    }
    if (grid.contains("steps")) {
      config.steps_grid = grid.at("steps").get<std::vector<int>>();
    }
    if (grid.contains("batch_size")) {
      config.batch_sizes = grid.at("batch_size").get<std::vector<int>>();
    }

    if (root.contains("split")) {
      const json& split = root.at("split");
      config.public_fraction = split.value("public_fraction", 0.1);
      config.test_fraction = split.value("test_fraction", 0.2);
    }

    if (root.contains("privacy")) {
      const json& privacy = root.at("privacy");
      config.delta = privacy.value("delta", 1e-5);
      const std::string backend = privacy.value("backend", "rdp-dpsgd");
      if (backend == "rdp-dpsgd") {
        config.private_backend = PrivacyMode::kRdpDpSgd;
      } else if (backend == "theoretical-noisy-sgd") {
        config.private_backend = PrivacyMode::kTheoreticalNoisySgd;
      } else {
        throw ConfigError("unknown backend '" + backend + "'");
      }
      config.budget_split = BudgetSplit::from_string(
          privacy.value("budget_split", "normalized:0.5"));
      config.formula_variant = formula_variant_from_string(
          privacy.value("formula_variant", "paper-literal"));
      config.clip_norm = privacy.value("clip_norm", 1.0);
    }

    if (root.contains("pillar")) {
      const json& p = root.at("pillar");
      config.gamma0 = p.value("gamma0", 0.5);
      config.xi0 = p.value("xi0", 0.0);
      config.eta = p.value("eta", 0.0);
      config.delta_k = p.value("delta_k", 0.0);
      config.beta = p.value("beta", 0.05);
      config.estimate_params = p.value("estimate_params", false);
    }

    if (root.contains("optimizer")) {
      const json& opt = root.at("optimizer");
      config.gd_steps = opt.value("gd_steps", 2000);
      config.gd_learning_rate = opt.value("gd_learning_rate", 0.5);
    }

    const json& output = root.at("output");
    config.output_path = output.at("path").get<std::string>();
    config.output_format =
        result_format_from_string(output.value("format", "csv"));
    config.record_timing = output.value("timing", false);

    config.threads = root.value("threads", 0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }

  config.validate();
  return config;
}

SweepConfig SweepConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::vector<ResultRow> run_sweep(const SweepConfig& config,
                                 std::uint64_t master_seed) {
  config.validate();

  // Cells are enumerated seed-major; the ordinal keys the per-cell stream.
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < config.seeds.size(); ++s) {
    std::size_t ordinal = 0;
    for (const std::string& method : config.methods) {
      for (int k : config.ks) {
        for (double eps : config.epsilons) {
          for (double fraction : config.labeled_fractions) {
            for (double lr : config.learning_rates) {
              for (int steps : config.steps_grid) {
                for (int batch : config.batch_sizes) {
                  Cell cell;
                  cell.index = cells.size();
                  cell.seed_pos = s;
                  cell.ordinal = ordinal++;
                  cell.method = method;
                  cell.k = k;
                  cell.epsilon = eps;
                  cell.labeled_fraction = fraction;
                  cell.learning_rate = lr;
                  cell.steps = steps;
                  cell.batch_size = batch;
                  cells.push_back(cell);
                }
              }
            }
          }
        }
      }
    }
  }

  const Rng master(master_seed);
  std::vector<ResultRow> rows(cells.size());

  // Per-seed data is shared by all that seed's cells; build it once.
  std::vector<SeedData> seed_data;
  seed_data.reserve(config.seeds.size());
  for (std::uint64_t seed_value : config.seeds) {
    seed_data.push_back(prepare_seed_data(config, master, seed_value));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      const std::uint64_t seed_value = config.seeds[cell.seed_pos];
      const auto start = std::chrono::steady_clock::now();
      try {
        rows[i] = run_cell(config, cell, seed_data[cell.seed_pos], seed_value,
                           master);
      } catch (const Error& e) {
        ResultRow row;
        row.dataset_id = config.dataset_id;
        row.method = cell.method;
        row.k = cell.k;
        row.epsilon = cell.epsilon;
        row.delta = config.delta;
        row.seed = seed_value;
        row.learning_rate = cell.learning_rate;
        row.steps = cell.steps;
        row.batch_size = cell.batch_size;
        row.budget_split = config.budget_split.to_string();
        row.formula_variant = to_string(config.formula_variant);
        row.backend = std::isinf(cell.epsilon)
                          ? to_string(PrivacyMode::kNonPrivate)
                          : to_string(config.private_backend);
        row.status = e.what();
        rows[i] = row;
      }
      if (config.record_timing) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        rows[i].wall_time_ms =
            std::chrono::duration<double, std::milli>(elapsed).count();
      }
    }
  };

  int n_threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads,
                                        static_cast<int>(cells.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

}  // namespace pillar
