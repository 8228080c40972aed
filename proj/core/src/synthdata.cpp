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

#include "pillar/synthdata.hpp"

#include <cmath>
#include <string>

namespace pillar {
namespace {

constexpr double kOrthogonalityTolerance = 1e-12;

double radius_term(const GmmSpec& spec, int n, double beta_or_delta) {
  const double log_arg = 2.0 * static_cast<double>(n) / beta_or_delta;
  return (4.0 * std::sqrt(static_cast<double>(spec.d)) +
          2.0 * std::sqrt(std::log(log_arg))) *
         (spec.sigma2 + spec.theta);
}

// One raw draw x = mu y + sigma g + sqrt(theta) z w with g ~ N(0, I),
// z ~ N(0, 1), which has the spec's conditional covariance.
Eigen::VectorXd raw_gmm_point(const GmmSpec& spec, int y, Rng& rng) {
  Eigen::VectorXd x = static_cast<double>(y) * spec.mu;
  if (spec.sigma2 > 0.0) {
    x += rng.normal_vector(spec.d, std::sqrt(spec.sigma2));
  }
  if (spec.theta > 0.0) {
    x += std::sqrt(spec.theta) * rng.normal() * spec.w_tilde;
  }
  return x;
}

}  // namespace

void GmmSpec::validate() const {
  if (d < 2) throw InfeasibleParamsError("GMM dimension must be at least 2");
  if (theta < 0.0 || sigma2 < 0.0) {
    throw InfeasibleParamsError("theta and sigma2 must be non-negative");
  }
  if (mu.size() != d || w_tilde.size() != d) {
    throw DimensionMismatchError("mu and w_tilde must have dimension d");
  }
  if (std::abs(mu.norm() - 1.0) > kOrthogonalityTolerance ||
      std::abs(w_tilde.norm() - 1.0) > kOrthogonalityTolerance) {
    throw InfeasibleParamsError("mu and w_tilde must be unit vectors");
  }
  if (std::abs(mu.dot(w_tilde)) > kOrthogonalityTolerance) {
    throw InfeasibleParamsError("mu and w_tilde must be orthogonal");
  }
}

GmmSpec GmmSpec::axis_aligned(int d, double theta, double sigma2) {
  GmmSpec spec;
  spec.d = d;
  spec.theta = theta;
  spec.sigma2 = sigma2;
  spec.mu = Eigen::VectorXd::Unit(d, 0);
  spec.w_tilde = Eigen::VectorXd::Unit(d, 1);
  spec.validate();
  return spec;
}

GmmSpec GmmSpec::random_rotated(int d, double theta, double sigma2, Rng& rng) {
  GmmSpec spec;
  spec.d = d;
  spec.theta = theta;
  spec.sigma2 = sigma2;
  spec.mu = rng.unit_sphere(d);
  // Gram-Schmidt a second direction against mu.
  Eigen::VectorXd v = rng.unit_sphere(d);
  v -= v.dot(spec.mu) * spec.mu;
  while (v.norm() < 1e-6) {
    v = rng.unit_sphere(d);
    v -= v.dot(spec.mu) * spec.mu;
  }
  spec.w_tilde = v / v.norm();
  spec.validate();
  return spec;
}

Eigen::MatrixXd gmm_population_covariance(const GmmSpec& spec) {
  spec.validate();
  Eigen::MatrixXd cov = spec.theta * (spec.w_tilde * spec.w_tilde.transpose());
  cov += spec.mu * spec.mu.transpose();
  cov += spec.sigma2 * Eigen::MatrixXd::Identity(spec.d, spec.d);
  return cov;
}

GmmSample sample_gmm(const GmmSpec& spec, int n, Rng& rng) {
  spec.validate();
  if (n < 1) throw EmptyDatasetError("sample_gmm needs n >= 1");

  GmmSample sample;
  sample.raw_points.resize(n, spec.d);
  sample.data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const int y = rng.uniform() < 0.5 ? -1 : 1;
    sample.data.labels[i] = y;
    sample.raw_points.row(i) = raw_gmm_point(spec, y, rng);
  }

  double max_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    max_norm = std::max(max_norm, sample.raw_points.row(i).norm());
  }
  sample.normalizer = std::max(max_norm, kZeroNormThreshold);
  sample.data.points = sample.raw_points / sample.normalizer;
  // Rounding can leave the largest point a hair outside the ball.
  for (int i = 0; i < n; ++i) {
    const double norm = sample.data.points.row(i).norm();
    if (norm > 1.0) sample.data.points.row(i) /= norm;
  }
  internal::assert_in_unit_ball(sample.data.points);
  return sample;
}

GmmTheory gmm_theoretical_params(const GmmSpec& spec, int n,
                                 double beta_or_delta) {
  spec.validate();
  if (n < 1 || !(beta_or_delta > 0.0) || !(beta_or_delta < 1.0)) {
    throw InfeasibleParamsError("need n >= 1 and beta_or_delta in (0, 1)");
  }
  const double term = radius_term(spec, n, beta_or_delta);
  GmmTheory theory;
  theory.radius_bound = 1.0 + term;
  theory.margin = 1.0 - term;
  theory.eigengap = spec.theta;
  theory.xi = 0.0;
  if (!(theory.margin > 0.0)) {
    throw InfeasibleParamsError(
        "parameters give non-positive margin gamma = " +
        std::to_string(theory.margin));
  }
  return theory;
}

ShiftedSample sample_shifted_unlabeled(const GmmSpec& spec, double eta, int n,
                                       Rng& rng) {
  spec.validate();
  if (!(eta >= 0.0) || eta >= 1.0) {
    throw InfeasibleParamsError("eta must lie in [0, 1)");
  }
  if (n < 1) throw EmptyDatasetError("sampler needs n >= 1");

  // Fixed normalizer for the clean component; data-independent so that the
  // same map is applied to the whole clean law.
  const double scale = 1.0 / (1.0 + radius_term(spec, n, 1e-9));

  ShiftedSample sample;
  sample.scale = scale;
  sample.data.points.resize(n, spec.d);
  for (int i = 0; i < n; ++i) {
    const bool contaminate = eta > 0.0 && rng.uniform() < eta;
    if (contaminate) {
      ++sample.contaminated;
      sample.data.points.row(i) = rng.unit_sphere(spec.d);
    } else {
      const int y = rng.uniform() < 0.5 ? -1 : 1;
      Eigen::VectorXd x = scale * raw_gmm_point(spec, y, rng);
      const double norm = x.norm();
      if (norm > 1.0) x /= norm;
      sample.data.points.row(i) = x;
    }
  }
  internal::assert_in_unit_ball(sample.data.points);
  return sample;
}

}  // namespace pillar
