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

#ifndef PILLAR_PIPELINE_HPP_
#define PILLAR_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "pillar/dataset.hpp"
#include "pillar/optim.hpp"
#include "pillar/spectral.hpp"

namespace pillar {

// Hinge margin scale gamma0 (1 - xi0 - 0.1 gamma0). Requires gamma0 in
// (0, 1), xi0 in [0, 1) and xi0 < 1 - gamma0 / 10; throws
// InfeasibleParamsError otherwise.
double compute_zeta(double gamma0, double xi0);

// Shifted-unlabelled variant gamma0 (1 - xi0 - 0.1 gamma0 - 7 eta / delta_k)
// for eta in [0, delta_k / 14) and xi0 < 1/2 - gamma0 / 10. At eta = 0 this
// equals compute_zeta exactly.
double compute_zeta_shift(double gamma0, double xi0, double eta,
                          double delta_k);

struct DpSgdOptions {
  int steps = 1000;
  double learning_rate = 0.1;
  int batch_size = 128;
  double clip_norm = 1.0;
  LossKind loss = LossKind::kScaledHinge;
};

struct PillarParams {
  int k = 2;
  double gamma0 = 0.5;
  double xi0 = 0.0;
  double eta = 0.0;       // TV shift bound; 0 means no shift
  double delta_k = 0.0;   // eigengap, required when eta > 0
  PrivacyBudget budget;
  double beta = 0.05;     // failure probability

  BudgetSplit budget_split;
  FormulaVariant formula_variant = FormulaVariant::kPaperLiteral;
  ABaseOptions a_base_options;
  DpSgdOptions dpsgd;
  int gd_steps = 2000;
  double gd_learning_rate = 0.5;

  // When set, the run report carries xi_hat for this direction.
  std::optional<Eigen::VectorXd> reference_separator;
};

struct RunReport {
  std::string backend;
  int k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double zeta = 0.0;
  double delta_k_hat = 0.0;            // empirical eigengap at k
  std::optional<double> xi_hat;        // only with a reference separator
  double sigma_used = 0.0;             // noise variance or multiplier
  std::uint64_t optimizer_steps = 0;
  bool step_capped = false;
  std::string budget_split;
  std::string formula_variant;
  bool degenerate_gap = false;
};

struct PillarFit {
  HalfspaceModel model;  // d-dimensional, ||w|| <= 1
  RunReport report;
};

// The full pipeline: uncentered covariance of the unlabelled data, top-k
// eigenbasis, labelled projection, private optimization with the scaled
// hinge loss at the computed zeta, and the lift w = A v back to d
// dimensions. The basis-building path receives only the unlabelled points,
// so the labelled data is touched exclusively inside the private optimizer
// and its loss scoring.
PillarFit pillar_fit(const LabeledDataset& labeled,
                     const UnlabeledDataset& unlabeled,
                     const PillarParams& params, Rng& rng);

// Fraction of points with y <w, x> <= 0; ties count as errors.
double evaluate(const HalfspaceModel& model, const LabeledDataset& data);

struct EstimatedParams {
  double gamma0 = 0.0;
  double xi0 = 0.0;
};

// Heuristic (gamma0, xi0) estimate from a labelled slice: fits a non-private
// hinge classifier, scans its minimum margin, and measures the low-rank
// defect of its direction against the basis. The theory treats these as
// known, so reports should flag estimated values as heuristic.
EstimatedParams estimate_pillar_params(const LabeledDataset& slice,
                                       const ProjectionBasis& basis,
                                       int gd_steps = 2000,
                                       double gd_learning_rate = 0.5);

}  // namespace pillar

#endif  // PILLAR_PIPELINE_HPP_
