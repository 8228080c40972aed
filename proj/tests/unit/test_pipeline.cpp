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

#include <doctest.h>

#include <cmath>

#include "pillar/synthdata.hpp"

namespace {

using namespace pillar;

TEST_CASE("zeta formula values") {
  CHECK(compute_zeta(0.5, 0.0) == doctest::Approx(0.475).epsilon(1e-15));
  CHECK(compute_zeta(0.5, 0.5) == doctest::Approx(0.225).epsilon(1e-15));
  CHECK_THROWS_AS(compute_zeta(0.5, 1.0 - 0.05), InfeasibleParamsError);
  CHECK_THROWS_AS(compute_zeta(0.0, 0.0), InfeasibleParamsError);
  CHECK_THROWS_AS(compute_zeta(1.0, 0.0), InfeasibleParamsError);
}

TEST_CASE("shifted zeta reduces to the unshifted formula at eta 0") {
  for (double gamma0 : {0.1, 0.3, 0.49}) {
    for (double xi0 : {0.0, 0.2, 0.4}) {
      CHECK(compute_zeta_shift(gamma0, xi0, 0.0, 0.0) ==
            compute_zeta(gamma0, xi0));
    }
  }
}

TEST_CASE("shifted zeta value and boundary") {
  CHECK(compute_zeta_shift(0.5, 0.0, 0.01, 0.2) ==
        doctest::Approx(0.30).epsilon(1e-12));
  CHECK_THROWS_AS(compute_zeta_shift(0.5, 0.0, 0.2 / 14.0, 0.2),
                  InfeasibleParamsError);
  CHECK_THROWS_AS(compute_zeta_shift(0.5, 0.46, 0.01, 0.2),
                  InfeasibleParamsError);
}

TEST_CASE("evaluate error rates and tie convention") {
  const GmmSpec spec = GmmSpec::axis_aligned(3, 0.0, 0.0);
  Rng rng(1);
  const GmmSample sample = sample_gmm(spec, 50, rng);

  // The Bayes direction separates perfectly; its negation gets everything
  // wrong; the orthogonal spike direction gives all ties, which count as
  // errors.
  CHECK(evaluate(HalfspaceModel{spec.mu}, sample.data) == 0.0);
  CHECK(evaluate(HalfspaceModel{-spec.mu}, sample.data) == 1.0);
  CHECK(evaluate(HalfspaceModel{spec.w_tilde}, sample.data) == 1.0);
  CHECK(evaluate(HalfspaceModel{Eigen::VectorXd::Zero(3)}, sample.data) == 1.0);

  CHECK_THROWS_AS(
      evaluate(HalfspaceModel{Eigen::VectorXd::Zero(2)}, sample.data),
      DimensionMismatchError);
}

TEST_CASE("lift consistency: k = d non-private fit equals project+fit+lift") {
  const GmmSpec spec = GmmSpec::axis_aligned(6, 0.2, 0.02);
  Rng data_rng(7);
  const GmmSample labeled = sample_gmm(spec, 120, data_rng);
  const ShiftedSample unlabeled =
      sample_shifted_unlabeled(spec, 0.0, 400, data_rng);

  PillarParams params;
  params.k = 6;
  params.gamma0 = 0.4;
  params.xi0 = 0.0;
  params.budget.mode = PrivacyMode::kNonPrivate;
  params.gd_steps = 300;
  params.gd_learning_rate = 0.3;

  Rng fit_rng(8);
  const PillarFit fit =
      pillar_fit(labeled.data, unlabeled.data, params, fit_rng);

  // Replay the pipeline by hand.
  const Eigen::MatrixXd cov = empirical_covariance(unlabeled.data, false);
  const ProjectionBasis basis = top_k_eigenbasis(cov, 6);
  const LabeledDataset projected = project(basis, labeled.data);
  const double zeta = compute_zeta(0.4, 0.0);
  const HalfspaceModel low = gd_baseline(projected, zeta, 300, 0.3);
  const Eigen::VectorXd lifted = basis.columns * low.weights;

  CHECK((fit.model.weights - lifted).norm() <= 1e-14);
  // Lift isometry.
  CHECK(fit.model.weights.norm() == doctest::Approx(low.weights.norm()).epsilon(1e-12));
  CHECK(fit.model.weights.norm() <= 1.0 + 1e-9);
}

TEST_CASE("non-private pillar fit reaches low error on the reference family") {
  // theta = sigma2 = 1/(2 C sqrt(d)) with C = 5, d = 50.
  const int d = 50;
  const double value = 1.0 / (2.0 * 5.0 * std::sqrt(static_cast<double>(d)));
  const GmmSpec spec = GmmSpec::axis_aligned(d, value, value);

  Rng data_rng(11);
  const GmmSample train = sample_gmm(spec, 200, data_rng);
  const ShiftedSample unlabeled =
      sample_shifted_unlabeled(spec, 0.0, 2000, data_rng);
  const GmmSample test = sample_gmm(spec, 2000, data_rng);

  PillarParams params;
  params.k = 2;
  params.gamma0 = 0.3;
  params.xi0 = 0.0;
  params.budget.mode = PrivacyMode::kNonPrivate;
  params.gd_steps = 2000;
  params.gd_learning_rate = 0.5;
  params.reference_separator = spec.mu;

  Rng fit_rng(12);
  const PillarFit fit =
      pillar_fit(train.data, unlabeled.data, params, fit_rng);
  CHECK(evaluate(fit.model, test.data) <= 0.05);
  REQUIRE(fit.report.xi_hat.has_value());
  CHECK(*fit.report.xi_hat <= 0.05);
  CHECK(fit.report.delta_k_hat > 0.0);
  CHECK(fit.report.zeta == doctest::Approx(compute_zeta(0.3, 0.0)));
}

TEST_CASE("theoretical noisy-sgd backend runs end to end") {
  const GmmSpec spec = GmmSpec::axis_aligned(8, 0.2, 0.02);
  Rng data_rng(13);
  const GmmSample train = sample_gmm(spec, 40, data_rng);
  const ShiftedSample unlabeled =
      sample_shifted_unlabeled(spec, 0.0, 400, data_rng);

  PillarParams params;
  params.k = 2;
  params.gamma0 = 0.4;
  params.xi0 = 0.0;
  params.budget.mode = PrivacyMode::kTheoreticalNoisySgd;
  params.budget.epsilon = 1.0;
  params.budget.delta = 1e-4;
  params.beta = 0.2;

  Rng fit_rng(14);
  const PillarFit fit =
      pillar_fit(train.data, unlabeled.data, params, fit_rng);
  CHECK(fit.model.weights.norm() <= 1.0 + 1e-9);
  CHECK(fit.report.sigma_used > 0.0);
  CHECK(fit.report.optimizer_steps > 0);
}

TEST_CASE("the PCA stage is oblivious to labels") {
  const GmmSpec spec = GmmSpec::axis_aligned(5, 0.2, 0.05);
  Rng data_rng(15);
  const GmmSample train = sample_gmm(spec, 60, data_rng);
  const ShiftedSample unlabeled =
      sample_shifted_unlabeled(spec, 0.0, 300, data_rng);

  LabeledDataset scrambled = train.data;
  for (auto& label : scrambled.labels) label = -label;

  PillarParams params;
  params.k = 2;
  params.gamma0 = 0.4;
  params.budget.mode = PrivacyMode::kNonPrivate;
  params.gd_steps = 100;
  params.reference_separator = spec.mu;

  Rng rng_a(16);
  Rng rng_b(16);
  const PillarFit fit = pillar_fit(train.data, unlabeled.data, params, rng_a);
  const PillarFit flipped =
      pillar_fit(scrambled, unlabeled.data, params, rng_b);

  // Everything the basis determines is identical; only the optimizer output
  // responds to labels.
  CHECK(fit.report.delta_k_hat == flipped.report.delta_k_hat);
  CHECK(*fit.report.xi_hat == *flipped.report.xi_hat);
  CHECK((fit.model.weights + flipped.model.weights).norm() <= 1e-9);
}

TEST_CASE("shift tolerance: eta = delta_k/28 still learns non-privately") {
  const GmmSpec spec = GmmSpec::axis_aligned(12, 0.4, 0.02);
  const double delta_k = spec.theta;
  const double eta = delta_k / 28.0;

  int successes = 0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng data_rng(100 + seed);
    const GmmSample train = sample_gmm(spec, 500, data_rng);
    const ShiftedSample unlabeled =
        sample_shifted_unlabeled(spec, eta, 3000, data_rng);
    const GmmSample test = sample_gmm(spec, 1000, data_rng);

    PillarParams params;
    params.k = 2;
    params.gamma0 = 0.3;
    params.xi0 = 0.0;
    params.eta = eta;
    params.delta_k = delta_k;
    params.budget.mode = PrivacyMode::kNonPrivate;
    params.gd_steps = 1500;
    params.gd_learning_rate = 0.5;

    Rng fit_rng(200 + seed);
    const PillarFit fit =
        pillar_fit(train.data, unlabeled.data, params, fit_rng);
    if (evaluate(fit.model, test.data) <= 0.05) ++successes;
  }
  CHECK(successes >= 8);
}

TEST_CASE("parameter estimation recovers sane gamma0 and xi0 on GMM data") {
  const GmmSpec spec = GmmSpec::axis_aligned(10, 0.3, 0.01);
  Rng data_rng(17);
  const GmmSample slice = sample_gmm(spec, 300, data_rng);
  const ProjectionBasis basis =
      top_k_eigenbasis(gmm_population_covariance(spec), 2);

  const EstimatedParams estimated = estimate_pillar_params(slice.data, basis);
  CHECK(estimated.gamma0 > 0.1);
  CHECK(estimated.xi0 <= 0.2);
}

TEST_CASE("pillar_fit rejects mismatched inputs") {
  const GmmSpec spec = GmmSpec::axis_aligned(4, 0.2, 0.05);
  Rng rng(18);
  const GmmSample labeled = sample_gmm(spec, 20, rng);
  UnlabeledDataset narrow;
  narrow.points = Eigen::MatrixXd::Zero(5, 3);

  PillarParams params;
  params.k = 2;
  params.budget.mode = PrivacyMode::kNonPrivate;
  Rng fit_rng(19);
  CHECK_THROWS_AS(pillar_fit(labeled.data, narrow, params, fit_rng),
                  DimensionMismatchError);

  const ShiftedSample unlabeled = sample_shifted_unlabeled(spec, 0.0, 50, rng);
  params.k = 9;
  CHECK_THROWS_AS(pillar_fit(labeled.data, unlabeled.data, params, fit_rng),
                  BadKError);
}

}  // namespace
