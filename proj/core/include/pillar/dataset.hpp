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

#ifndef PILLAR_DATASET_HPP_
#define PILLAR_DATASET_HPP_

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pillar/errors.hpp"
#include "pillar/rng.hpp"

namespace pillar {

// Norm slack accepted by the unit-ball checks.
inline constexpr double kNormTolerance = 1e-9;

// Inputs with norm below this are rejected as zero vectors.
inline constexpr double kZeroNormThreshold = 1e-12;

// Points live in the unit ball of R^d, one point per row. Raw ingested data
// is normalized onto the unit sphere; points produced by projections or by
// the synthetic samplers may lie strictly inside the ball.
//
// Datasets are immutable after construction by convention and safe to share
// across threads. Membership checks are debug assertions; `validate()` is the
// throwing form used at ingestion boundaries.
struct LabeledDataset {
  Eigen::MatrixXd points;   // n x d
  std::vector<int> labels;  // n entries, each -1 or +1

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
  void validate() const;
};

struct UnlabeledDataset {
  Eigen::MatrixXd points;  // n x d

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
  void validate() const;
};

// Linear halfspace sign(<w, x>) with w in the unit ball.
struct HalfspaceModel {
  Eigen::VectorXd weights;

  Eigen::Index dim() const { return weights.size(); }
  int predict(const Eigen::VectorXd& x) const {
    return weights.dot(x) > 0.0 ? 1 : -1;
  }
};

enum class PrivacyMode {
  kTheoreticalNoisySgd,  // Noisy-SGD with the printed calibration
  kRdpDpSgd,             // clipped DP-SGD, RDP accounting
  kNonPrivate,
};

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 1e-5;
  PrivacyMode mode = PrivacyMode::kRdpDpSgd;

  void validate() const;
};

const char* to_string(PrivacyMode mode);

// Scales every row onto the unit sphere, preserving direction.
// Throws ZeroVectorError if any row has norm below kZeroNormThreshold.
Eigen::MatrixXd normalize_to_unit_sphere(const Eigen::MatrixXd& points);

// Splits off floor(public_fraction * n) points as a public unlabelled part;
// the rest stays private with labels. The split is a seeded permutation:
// parts are disjoint, their union is the input, and the same seed reproduces
// the same split. Throws BadFractionError if either part would be empty.
std::pair<UnlabeledDataset, LabeledDataset> split_public_private(
    const LabeledDataset& dataset, double public_fraction, Rng& rng);

namespace internal {
// Debug-mode dataset checks (no-ops in release builds).
void assert_in_unit_ball(const Eigen::MatrixXd& points);
}  // namespace internal

}  // namespace pillar

#endif  // PILLAR_DATASET_HPP_
