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

#include "pillar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pillar/mechanisms.hpp"

namespace pillar {

double compute_zeta(double gamma0, double xi0) {
  if (!(gamma0 > 0.0) || !(gamma0 < 1.0)) {
    throw InfeasibleParamsError("gamma0 must lie in (0, 1)");
  }
  if (!(xi0 >= 0.0) || xi0 >= 1.0) {
    throw InfeasibleParamsError("xi0 must lie in [0, 1)");
  }
  if (!(xi0 < 1.0 - gamma0 / 10.0)) {
    throw InfeasibleParamsError("need xi0 < 1 - gamma0/10");
  }
  return gamma0 * (1.0 - xi0 - 0.1 * gamma0);
}

double compute_zeta_shift(double gamma0, double xi0, double eta,
                          double delta_k) {
  if (!(gamma0 > 0.0) || !(gamma0 < 1.0)) {
    throw InfeasibleParamsError("gamma0 must lie in (0, 1)");
  }
  if (!(xi0 >= 0.0) || xi0 >= 1.0) {
    throw InfeasibleParamsError("xi0 must lie in [0, 1)");
  }
  if (!(xi0 < 0.5 - gamma0 / 10.0)) {
    throw InfeasibleParamsError("need xi0 < 1/2 - gamma0/10");
  }
  if (eta < 0.0) throw InfeasibleParamsError("eta must be non-negative");
  if (eta == 0.0) {
    // Reduces exactly to the unshifted formula (and needs no eigengap).
    return gamma0 * (1.0 - xi0 - 0.1 * gamma0);
  }
  if (!(delta_k > 0.0) || !(eta < delta_k / 14.0)) {
    throw InfeasibleParamsError("need eta in [0, delta_k / 14)");
  }
  const double zeta =
      gamma0 * (1.0 - xi0 - 0.1 * gamma0 - 7.0 * eta / delta_k);
  if (!(zeta > 0.0)) {
    throw InfeasibleParamsError("shift parameters give non-positive zeta");
  }
  return zeta;
}

PillarFit pillar_fit(const LabeledDataset& labeled,
                     const UnlabeledDataset& unlabeled,
                     const PillarParams& params, Rng& rng) {
  if (labeled.dim() != unlabeled.dim()) {
    throw DimensionMismatchError("labelled and unlabelled dimensions differ");
  }
  if (params.k < 1 || params.k > labeled.dim()) {
    throw BadKError("k must lie in [1, d]");
  }
  params.budget.validate();

  const double zeta =
      params.eta > 0.0
          ? compute_zeta_shift(params.gamma0, params.xi0, params.eta,
                               params.delta_k)
          : compute_zeta(params.gamma0, params.xi0);

  // PCA stage: sees only the unlabelled points.
  const Eigen::MatrixXd cov = empirical_covariance(unlabeled, false);
  const ProjectionBasis basis = top_k_eigenbasis(cov, params.k);
  const Eigen::VectorXd spectrum = sorted_eigenvalues(cov);

  const LabeledDataset projected = project(basis, labeled);

  RunReport report;
  report.backend = to_string(params.budget.mode);
  report.k = params.k;
  report.epsilon = params.budget.epsilon;
  report.delta = params.budget.delta;
  report.zeta = zeta;
  report.delta_k_hat = params.k < labeled.dim()
                           ? eigengap(spectrum, params.k)
                           : 0.0;
  report.degenerate_gap = basis.degenerate_gap;
  report.budget_split = params.budget_split.to_string();
  report.formula_variant = to_string(params.formula_variant);
  if (params.reference_separator.has_value()) {
    report.xi_hat = estimate_xi(basis, *params.reference_separator);
  }

  HalfspaceModel low_dim;
  switch (params.budget.mode) {
    case PrivacyMode::kTheoreticalNoisySgd: {
      ABaseOptions options = params.a_base_options;
      options.variant = params.formula_variant;
      NoisySgdReport noisy_report;
      low_dim = a_noisy_sgd(projected, zeta, params.budget.epsilon,
                            params.budget.delta, params.beta / 4.0,
                            params.budget_split, rng, options, &noisy_report);
      report.sigma_used = noisy_report.sigma_squared;
      report.optimizer_steps =
          noisy_report.steps_per_run *
          static_cast<std::uint64_t>(noisy_report.base_runs);
      report.step_capped = noisy_report.capped;
      break;
    }
    case PrivacyMode::kRdpDpSgd: {
      SgdSchedule schedule = SgdSchedule::constant(
          params.dpsgd.steps, params.dpsgd.learning_rate,
          std::min<int>(params.dpsgd.batch_size,
                        static_cast<int>(projected.size())),
          params.dpsgd.clip_norm);
      const double rate = static_cast<double>(schedule.batch_size) /
                          static_cast<double>(projected.size());
      const double sigma = calibrate_dpsgd_sigma(
          params.budget.epsilon, params.budget.delta, schedule.steps, rate);
      DpSgdStats stats;
      low_dim = dp_sgd(projected, params.dpsgd.loss, zeta, schedule, sigma,
                       rng, &stats);
      report.sigma_used = sigma;
      report.optimizer_steps = stats.steps;
      break;
    }
    case PrivacyMode::kNonPrivate: {
      low_dim = gd_baseline(projected, zeta, params.gd_steps,
                            params.gd_learning_rate);
      report.sigma_used = 0.0;
      report.optimizer_steps = static_cast<std::uint64_t>(params.gd_steps);
      break;
    }
  }

  // Lift back: ||A v|| = ||v|| for orthonormal columns, so the model stays
  // in the unit ball.
  PillarFit fit;
  fit.model.weights = basis.columns * low_dim.weights;
  fit.report = report;
  return fit;
}

double evaluate(const HalfspaceModel& model, const LabeledDataset& data) {
  if (model.dim() != data.dim()) {
    throw DimensionMismatchError("model and data dimensions differ");
  }
  if (data.size() == 0) throw EmptyDatasetError("cannot evaluate on no data");
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double agreement =
        static_cast<double>(data.labels[i]) * model.weights.dot(data.points.row(i));
    if (agreement <= 0.0) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(data.size());
}

EstimatedParams estimate_pillar_params(const LabeledDataset& slice,
                                       const ProjectionBasis& basis,
                                       int gd_steps, double gd_learning_rate) {
  if (slice.dim() != basis.source_dim) {
    throw DimensionMismatchError("slice dimension does not match basis");
  }
  // Plain hinge (zeta = 1) stands in for the SVM direction.
  const HalfspaceModel fit =
      gd_baseline(slice, 1.0, gd_steps, gd_learning_rate);
  const double weight_norm = fit.weights.norm();
  if (weight_norm < kZeroNormThreshold) {
    throw InfeasibleParamsError("separator estimate collapsed to zero");
  }
  const Eigen::VectorXd direction = fit.weights / weight_norm;

  double min_margin = 1.0;
  for (Eigen::Index i = 0; i < slice.size(); ++i) {
    const double point_norm = slice.points.row(i).norm();
    if (point_norm < kZeroNormThreshold) continue;
    const double margin = static_cast<double>(slice.labels[i]) *
                          direction.dot(slice.points.row(i)) / point_norm;
    min_margin = std::min(min_margin, margin);
  }

  EstimatedParams params;
  params.gamma0 = std::clamp(min_margin, 0.01, 0.99);
  params.xi0 = estimate_xi(basis, direction);
  return params;
}

}  // namespace pillar
