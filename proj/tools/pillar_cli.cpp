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

// Command-line front end: gen-gmm, xi-report, fit, sweep, ingest-check.
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pillar/baselines.hpp"
#include "pillar/dataset.hpp"
#include "pillar/feature_io.hpp"
#include "pillar/pipeline.hpp"
#include "pillar/results.hpp"
#include "pillar/spectral.hpp"
#include "pillar/sweep.hpp"
#include "pillar/synthdata.hpp"

namespace {

using nlohmann::json;
using namespace pillar;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct GenGmmArgs {
  int d = 50;
  double theta = 0.05;
  double sigma2 = 0.05;
  int n = 1000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format = "csv";
  bool unlabeled = false;
  double eta = 0.0;
  bool random_orientation = false;
};

int run_gen_gmm(const GenGmmArgs& args) {
  Rng rng(args.seed);
  GmmSpec spec = args.random_orientation
                     ? GmmSpec::random_rotated(args.d, args.theta, args.sigma2,
                                               rng)
                     : GmmSpec::axis_aligned(args.d, args.theta, args.sigma2);
  const FeatureFormat format = feature_format_from_string(args.format);
  if (args.unlabeled || args.eta > 0.0) {
    const ShiftedSample sample =
        sample_shifted_unlabeled(spec, args.eta, args.n, rng);
    save_features(args.out, format, sample.data.points, nullptr);
    std::cout << "wrote " << args.n << " unlabelled points (d=" << args.d
              << ", eta=" << args.eta << ") to " << args.out << "\n";
  } else {
    const GmmSample sample = sample_gmm(spec, args.n, rng);
    save_features(args.out, format, sample.data.points, &sample.data.labels);
    std::cout << "wrote " << args.n << " labelled points (d=" << args.d
              << ") to " << args.out << "\n";
  }
  return kExitOk;
}

struct XiReportArgs {
  std::string path;
  std::string format;
  std::vector<int> ks;
  std::vector<int> classes;
  double public_fraction = 0.1;
  std::uint64_t seed = 0;
  int gd_steps = 2000;
};

int run_xi_report(const XiReportArgs& args) {
  const FeatureFormat format = args.format.empty()
                                   ? guess_feature_format(args.path)
                                   : feature_format_from_string(args.format);
  const FeatureData features = load_features(args.path, format);

  LabeledDataset labeled;
  const std::vector<int> present = distinct_labels(features);
  if (args.classes.size() == 2) {
    labeled = reduce_one_vs_one(features, args.classes[0], args.classes[1]);
  } else if (present.size() == 2 && present[0] == -1 && present[1] == 1) {
    labeled = features.to_labeled();
  } else {
    throw ConfigError(
        "multiclass file: pass --classes A B to pick a pair (found " +
        std::to_string(present.size()) + " classes)");
  }

  Rng rng(args.seed);
  auto [public_part, private_part] =
      split_public_private(labeled, args.public_fraction, rng);

  // SVM stand-in: non-private hinge fit on the private part.
  const HalfspaceModel svm = gd_baseline(private_part, 1.0, args.gd_steps, 0.5);
  if (svm.weights.norm() < kZeroNormThreshold) {
    throw ConfigError("separator collapsed to zero; data may be degenerate");
  }
  const Eigen::VectorXd direction = svm.weights / svm.weights.norm();

  double min_margin = 1.0;
  for (Eigen::Index i = 0; i < private_part.size(); ++i) {
    const double norm = private_part.points.row(i).norm();
    if (norm < kZeroNormThreshold) continue;
    min_margin = std::min(min_margin,
                          private_part.labels[i] *
                              direction.dot(private_part.points.row(i)) / norm);
  }

  const Eigen::MatrixXd cov = empirical_covariance(public_part, false);
  std::vector<int> ks = args.ks;
  if (ks.empty()) {
    for (int k = 1; k <= static_cast<int>(labeled.dim());
         k = k < 8 ? k + 1 : k * 2) {
      ks.push_back(k);
    }
  }

  std::cout << "n=" << labeled.size() << " d=" << labeled.dim()
            << " public=" << public_part.size()
            << " min-margin=" << min_margin << "\n";
  std::cout << "k,xi_hat\n";
  for (int k : ks) {
    if (k < 1 || k > labeled.dim()) continue;
    const ProjectionBasis basis = top_k_eigenbasis(cov, k);
    std::cout << k << "," << estimate_xi(basis, direction) << "\n";
  }
  return kExitOk;
}

struct FitArgs {
  std::string data_path;
  std::string format;
  std::string unlabeled_path;
  std::vector<int> classes;
  int k = 2;
  double epsilon = 0.1;
  double delta = 1e-5;
  std::string backend = "rdp-dpsgd";
  double gamma0 = 0.5;
  double xi0 = 0.0;
  double eta = 0.0;
  double delta_k = 0.0;
  double beta = 0.05;
  bool estimate_params = false;
  bool multiclass = false;
  double public_fraction = 0.1;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  int steps = 1000;
  double learning_rate = 0.1;
  int batch_size = 128;
  double clip_norm = 1.0;
  int gd_steps = 2000;
  double gd_learning_rate = 0.5;
  std::string budget_split = "normalized:0.5";
  std::string formula_variant = "paper-literal";
};

int run_fit_multiclass(const FitArgs& args, const FeatureData& features,
                       Rng& rng) {
  // Projection front-end plus softmax DP-SGD; out of the binary theory's
  // scope but useful for ingested multiclass features.
  const auto n = features.size();
  const auto n_public = static_cast<Eigen::Index>(args.public_fraction * n);
  if (n_public < 1 || n_public >= n) throw ConfigError("bad public fraction");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  Eigen::MatrixXd public_points(n_public, features.dim());
  for (Eigen::Index i = 0; i < n_public; ++i) {
    public_points.row(i) = features.points.row(order[i]);
  }
  const auto n_rest = n - n_public;
  const auto n_test = static_cast<Eigen::Index>(args.test_fraction * n_rest);
  Eigen::MatrixXd train_points(n_rest - n_test, features.dim());
  Eigen::MatrixXd test_points(n_test, features.dim());
  std::vector<int> train_labels;
  std::vector<int> test_labels;
  for (Eigen::Index i = 0; i < n_rest; ++i) {
    const auto src = order[n_public + i];
    if (i < n_test) {
      test_points.row(i) = features.points.row(src);
      test_labels.push_back(features.labels[src]);
    } else {
      train_points.row(i - n_test) = features.points.row(src);
      train_labels.push_back(features.labels[src]);
    }
  }

  const Eigen::MatrixXd cov = empirical_second_moment(public_points, false);
  const ProjectionBasis basis = top_k_eigenbasis(cov, args.k);
  const Eigen::MatrixXd train_proj = train_points * basis.columns;
  const Eigen::MatrixXd test_proj = test_points * basis.columns;

  SgdSchedule schedule = SgdSchedule::constant(
      args.steps, args.learning_rate,
      std::min<int>(args.batch_size, static_cast<int>(train_proj.rows())),
      args.clip_norm);
  double sigma = 0.0;
  if (std::isfinite(args.epsilon)) {
    const double rate = static_cast<double>(schedule.batch_size) /
                        static_cast<double>(train_proj.rows());
    sigma = calibrate_dpsgd_sigma(args.epsilon, args.delta, schedule.steps,
                                  rate);
  }
  const MulticlassModel model =
      multiclass_dp_sgd(train_proj, train_labels, schedule, sigma, rng);

  json report;
  report["mode"] = "multiclass-softmax";
  report["k"] = args.k;
  report["epsilon"] = std::isfinite(args.epsilon)
                          ? json(args.epsilon)
                          : json("inf");
  report["noise_multiplier"] = sigma;
  report["train_error"] =
      evaluate_multiclass(model, train_proj, train_labels);
  report["test_error"] = evaluate_multiclass(model, test_proj, test_labels);
  report["n_train"] = static_cast<int>(train_proj.rows());
  report["n_test"] = static_cast<int>(test_proj.rows());
  report["note"] = "multiclass path is outside the binary halfspace theory";
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int run_fit(const FitArgs& args) {
  const FeatureFormat format = args.format.empty()
                                   ? guess_feature_format(args.data_path)
                                   : feature_format_from_string(args.format);
  const FeatureData features = load_features(args.data_path, format);
  if (!features.has_labels) {
    throw ConfigError("fit needs a labelled feature file");
  }

  Rng rng(args.seed);
  if (args.multiclass) {
    return run_fit_multiclass(args, features, rng);
  }

  LabeledDataset labeled;
  const std::vector<int> present = distinct_labels(features);
  if (args.classes.size() == 2) {
    labeled = reduce_one_vs_one(features, args.classes[0], args.classes[1]);
  } else if (present.size() == 2 && present[0] == -1 && present[1] == 1) {
    labeled = features.to_labeled();
  } else {
    throw ConfigError("multiclass file: pass --classes A B or --multiclass");
  }

  UnlabeledDataset public_part;
  LabeledDataset private_part;
  if (!args.unlabeled_path.empty()) {
    const FeatureData unlabeled_features =
        load_features(args.unlabeled_path, guess_feature_format(args.unlabeled_path));
    public_part = unlabeled_features.to_unlabeled();
    private_part = labeled;
  } else {
    std::tie(public_part, private_part) =
        split_public_private(labeled, args.public_fraction, rng);
  }
  auto [train, test] = stratified_holdout(private_part, args.test_fraction, rng);

  PillarParams params;
  params.k = args.k;
  params.gamma0 = args.gamma0;
  params.xi0 = args.xi0;
  params.eta = args.eta;
  params.delta_k = args.delta_k;
  params.beta = args.beta;
  params.budget.delta = args.delta;
  if (!std::isfinite(args.epsilon)) {
    params.budget.mode = PrivacyMode::kNonPrivate;
    params.budget.epsilon = 0.0;
  } else {
    params.budget.epsilon = args.epsilon;
    if (args.backend == "rdp-dpsgd") {
      params.budget.mode = PrivacyMode::kRdpDpSgd;
    } else if (args.backend == "theoretical-noisy-sgd") {
      params.budget.mode = PrivacyMode::kTheoreticalNoisySgd;
    } else if (args.backend == "non-private") {
      params.budget.mode = PrivacyMode::kNonPrivate;
    } else {
      throw ConfigError("unknown backend '" + args.backend + "'");
    }
  }
  params.budget_split = BudgetSplit::from_string(args.budget_split);
  params.formula_variant = formula_variant_from_string(args.formula_variant);
  params.dpsgd.steps = args.steps;
  params.dpsgd.learning_rate = args.learning_rate;
  params.dpsgd.batch_size = args.batch_size;
  params.dpsgd.clip_norm = args.clip_norm;
  params.gd_steps = args.gd_steps;
  params.gd_learning_rate = args.gd_learning_rate;

  bool params_estimated = false;
  if (args.estimate_params) {
    const Eigen::MatrixXd cov = empirical_covariance(public_part, false);
    const ProjectionBasis basis = top_k_eigenbasis(cov, args.k);
    const EstimatedParams estimated =
        estimate_pillar_params(train, basis, args.gd_steps,
                               args.gd_learning_rate);
    params.gamma0 = estimated.gamma0;
    params.xi0 = estimated.xi0;
    params_estimated = true;
  }

  const PillarFit fit = pillar_fit(train, public_part, params, rng);

  json report;
  report["backend"] = fit.report.backend;
  report["k"] = fit.report.k;
  report["epsilon"] = std::isfinite(args.epsilon) ? json(args.epsilon)
                                                  : json("inf");
  report["delta"] = fit.report.delta;
  report["zeta"] = fit.report.zeta;
  report["gamma0"] = params.gamma0;
  report["xi0"] = params.xi0;
  report["params_estimated_heuristically"] = params_estimated;
  report["delta_k_hat"] = fit.report.delta_k_hat;
  report["sigma_used"] = fit.report.sigma_used;
  report["optimizer_steps"] = fit.report.optimizer_steps;
  report["step_capped"] = fit.report.step_capped;
  report["budget_split"] = fit.report.budget_split;
  report["formula_variant"] = fit.report.formula_variant;
  report["degenerate_gap"] = fit.report.degenerate_gap;
  report["n_train"] = static_cast<int>(train.size());
  report["n_test"] = static_cast<int>(test.size());
  report["n_public"] = static_cast<int>(public_part.size());
  report["train_error"] = evaluate(fit.model, train);
  report["test_error"] = evaluate(fit.model, test);
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output_override;
  int threads_override = -1;
};

int run_sweep_command(const SweepArgs& args) {
  SweepConfig config = SweepConfig::from_file(args.config_path);
  if (!args.output_override.empty()) config.output_path = args.output_override;
  if (args.threads_override >= 0) config.threads = args.threads_override;

  const std::vector<ResultRow> rows = run_sweep(config, args.seed);
  write_results(rows, config.output_path, config.output_format);

  std::size_t failures = 0;
  for (const ResultRow& row : rows) {
    if (!row.status.empty()) ++failures;
  }
  std::cout << "wrote " << rows.size() << " rows to " << config.output_path;
  if (failures > 0) std::cout << " (" << failures << " failed cells)";
  std::cout << "\n";
  return kExitOk;
}

struct IngestCheckArgs {
  std::string path;
  std::string format;
};

int run_ingest_check(const IngestCheckArgs& args) {
  const FeatureFormat format = args.format.empty()
                                   ? guess_feature_format(args.path)
                                   : feature_format_from_string(args.format);
  const FeatureData data = load_features(args.path, format);

  double min_norm = 1e300;
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double norm = data.points.row(i).norm();
    min_norm = std::min(min_norm, norm);
    max_norm = std::max(max_norm, norm);
  }

  json report;
  report["path"] = args.path;
  report["rows"] = static_cast<std::int64_t>(data.size());
  report["dim"] = static_cast<std::int64_t>(data.dim());
  report["has_labels"] = data.has_labels;
  if (data.has_labels) {
    json histogram = json::object();
    for (int label : distinct_labels(data)) {
      int count = 0;
      for (int l : data.labels) {
        if (l == label) ++count;
      }
      histogram[std::to_string(label)] = count;
    }
    report["label_histogram"] = histogram;
  }
  report["norm_min"] = data.size() > 0 ? min_norm : 0.0;
  report["norm_max"] = data.size() > 0 ? max_norm : 0.0;
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

double parse_epsilon_flag(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw ConfigError("bad epsilon '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-private linear halfspace learning"};
  app.require_subcommand(1);

  GenGmmArgs gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-gmm", "Generate a synthetic Gaussian-mixture feature file");
  gen_cmd->add_option("--d", gen.d, "Dimension")->check(CLI::Range(2, 100000));
  gen_cmd->add_option("--theta", gen.theta, "Spike strength");
  gen_cmd->add_option("--sigma2", gen.sigma2, "Isotropic variance");
  gen_cmd->add_option("--n", gen.n, "Number of points")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output file")->required();
  gen_cmd->add_option("--format", gen.format, "csv or packed-binary");
  gen_cmd->add_flag("--unlabeled", gen.unlabeled, "Drop labels");
  gen_cmd->add_option("--eta", gen.eta,
                      "TV-shift contamination rate (implies --unlabeled)");
  gen_cmd->add_flag("--random-orientation", gen.random_orientation,
                    "Random (mu, w) pair instead of axes");

  XiReportArgs xi;
  CLI::App* xi_cmd = app.add_subcommand(
      "xi-report", "Low-rank separability report for a feature file");
  xi_cmd->add_option("--file", xi.path, "Feature file")->required();
  xi_cmd->add_option("--format", xi.format, "csv or packed-binary");
  xi_cmd->add_option("--k", xi.ks, "k values to report");
  xi_cmd->add_option("--classes", xi.classes, "Class pair for one-vs-one")
      ->expected(2);
  xi_cmd->add_option("--public-fraction", xi.public_fraction,
                     "Fraction used for the PCA side");
  xi_cmd->add_option("--seed", xi.seed, "Seed")->required();
  xi_cmd->add_option("--gd-steps", xi.gd_steps, "Separator fit steps");

  FitArgs fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "One PILLAR fit with a report");
  fit_cmd->add_option("--data", fit.data_path, "Labelled feature file")
      ->required();
  fit_cmd->add_option("--format", fit.format, "csv or packed-binary");
  fit_cmd->add_option("--unlabeled", fit.unlabeled_path,
                      "Separate public unlabelled feature file");
  fit_cmd->add_option("--classes", fit.classes, "Class pair for one-vs-one")
      ->expected(2);
  fit_cmd->add_option("--k", fit.k, "Projection dimension")->required();
  std::string eps_text = "0.1";
  fit_cmd->add_option("--epsilon", eps_text, "Privacy budget or 'inf'");
  fit_cmd->add_option("--delta", fit.delta, "Privacy delta");
  fit_cmd->add_option("--backend", fit.backend,
                      "rdp-dpsgd | theoretical-noisy-sgd | non-private");
  fit_cmd->add_option("--gamma0", fit.gamma0, "Margin lower bound");
  fit_cmd->add_option("--xi0", fit.xi0, "Low-rank defect bound");
  fit_cmd->add_option("--eta", fit.eta, "TV shift bound");
  fit_cmd->add_option("--delta-k", fit.delta_k, "Eigengap (needed when eta>0)");
  fit_cmd->add_option("--beta", fit.beta, "Failure probability");
  fit_cmd->add_flag("--estimate-params", fit.estimate_params,
                    "Estimate gamma0/xi0 heuristically");
  fit_cmd->add_flag("--multiclass", fit.multiclass,
                    "Softmax DP-SGD on multiclass labels");
  fit_cmd->add_option("--public-fraction", fit.public_fraction,
                      "Public split fraction");
  fit_cmd->add_option("--test-fraction", fit.test_fraction, "Test holdout");
  fit_cmd->add_option("--seed", fit.seed, "Seed")->required();
  fit_cmd->add_option("--steps", fit.steps, "DP-SGD steps");
  fit_cmd->add_option("--learning-rate", fit.learning_rate, "DP-SGD rate");
  fit_cmd->add_option("--batch-size", fit.batch_size, "DP-SGD batch");
  fit_cmd->add_option("--clip-norm", fit.clip_norm, "DP-SGD clip norm");
  fit_cmd->add_option("--gd-steps", fit.gd_steps, "Non-private GD steps");
  fit_cmd->add_option("--gd-learning-rate", fit.gd_learning_rate,
                      "Non-private GD rate");
  fit_cmd->add_option("--budget-split", fit.budget_split,
                      "normalized:<f> or paper-literal");
  fit_cmd->add_option("--formula-variant", fit.formula_variant,
                      "paper-literal or bassily-original");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a grid sweep from a config file");
  sweep_cmd->add_option("--config", sweep_args.config_path, "JSON config")
      ->required();
  sweep_cmd->add_option("--seed", sweep_args.seed, "Master seed")->required();
  sweep_cmd->add_option("--out", sweep_args.output_override,
                        "Override the configured output path");
  sweep_cmd->add_option("--threads", sweep_args.threads_override,
                        "Override worker count");

  IngestCheckArgs ingest;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest-check", "Validate a feature file");
  ingest_cmd->add_option("--file", ingest.path, "Feature file")->required();
  ingest_cmd->add_option("--format", ingest.format, "csv or packed-binary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen_cmd->parsed()) return run_gen_gmm(gen);
    if (xi_cmd->parsed()) return run_xi_report(xi);
    if (fit_cmd->parsed()) {
      fit.epsilon = parse_epsilon_flag(eps_text);
      return run_fit(fit);
    }
    if (sweep_cmd->parsed()) return run_sweep_command(sweep_args);
    if (ingest_cmd->parsed()) return run_ingest_check(ingest);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
