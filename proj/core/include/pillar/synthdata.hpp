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

#ifndef PILLAR_SYNTHDATA_HPP_
#define PILLAR_SYNTHDATA_HPP_

#include <cstddef>

#include <Eigen/Core>

#include "pillar/dataset.hpp"
#include "pillar/rng.hpp"

namespace pillar {

// Two-component Gaussian mixture with class means +/- mu and shared
// covariance theta * w w^T + sigma2 * I. The marginal second moment is then
// theta * w w^T + mu mu^T + sigma2 * I, whose top two eigenvectors are mu
// (eigenvalue 1 + sigma2) and w (eigenvalue theta + sigma2); the rest of the
// spectrum sits at sigma2, so the eigengap at k = 2 is exactly theta.
//
// mu is the Bayes separating direction; w is the covariance spike, orthogonal
// to mu. Both lie in the span of the top two principal components, so the
// low-rank defect xi is 0 at k = 2.
struct GmmSpec {
  int d = 2;
  double theta = 0.0;   // spike strength, >= 0
  double sigma2 = 0.0;  // isotropic variance, >= 0
  Eigen::VectorXd mu;
  Eigen::VectorXd w_tilde;

  void validate() const;

  // mu = e1, w = e2.
  static GmmSpec axis_aligned(int d, double theta, double sigma2);
  // Seeded random orthonormal (mu, w) pair, for tests that should not rely
  // on axis alignment.
  static GmmSpec random_rotated(int d, double theta, double sigma2, Rng& rng);
};

// Analytic certificates for a sample of size n:
//   M     = 1 + (4 sqrt(d) + 2 sqrt(ln(2n/delta))) (sigma2 + theta)
//   gamma = 1 - (4 sqrt(d) + 2 sqrt(ln(2n/delta))) (sigma2 + theta)
// M bounds the raw sample radius with high probability and gamma lower
// bounds the raw margin along mu.
struct GmmTheory {
  double radius_bound = 1.0;  // M
  double margin = 1.0;        // gamma
  double eigengap = 0.0;      // delta_k at k = 2, equals theta
  double xi = 0.0;            // exactly 0 for this family
};

// theta * w w^T + mu mu^T + sigma2 * I.
Eigen::MatrixXd gmm_population_covariance(const GmmSpec& spec);

struct GmmSample {
  LabeledDataset data;          // normalized into the unit ball
  Eigen::MatrixXd raw_points;   // pre-normalization draws
  double normalizer = 1.0;      // the empirical max norm used
};

// n labelled draws: y uniform on {-1, +1}, x ~ N(mu y, theta w w^T +
// sigma2 I). All points are divided by the empirical max norm (then nudged
// into the ball if rounding left them a hair outside), so the normalized set
// satisfies the dataset invariants while raw points stay available for
// diagnostics.
GmmSample sample_gmm(const GmmSpec& spec, int n, Rng& rng);

// Evaluates the printed certificate formulas. Throws InfeasibleParamsError
// when the parameters give a non-positive margin.
GmmTheory gmm_theoretical_params(const GmmSpec& spec, int n,
                                 double beta_or_delta);

struct ShiftedSample {
  UnlabeledDataset data;
  std::size_t contaminated = 0;  // how many draws came from the shift law
  double scale = 1.0;            // fixed normalizer applied to clean draws
};

// Unlabelled sampler at bounded TV distance from the GMM marginal: each
// point is a clean marginal draw with probability 1 - eta and a draw from a
// fixed contaminating law (uniform on the unit sphere) otherwise, so the
// mixture is within TV distance eta of the clean law by construction.
//
// Clean draws are scaled by a fixed (data-independent) factor derived from
// the radius certificate and ball-projected, which keeps dataset invariants
// without breaking the TV bound: the identical map is applied to both
// component laws. Throws InfeasibleParamsError for eta outside [0, 1).
ShiftedSample sample_shifted_unlabeled(const GmmSpec& spec, double eta, int n,
                                       Rng& rng);

}  // namespace pillar

#endif  // PILLAR_SYNTHDATA_HPP_
