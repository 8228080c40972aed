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

#ifndef PILLAR_SPECTRAL_HPP_
#define PILLAR_SPECTRAL_HPP_

#include <Eigen/Core>

#include "pillar/dataset.hpp"

namespace pillar {

// Eigengaps below this are treated as degenerate: the projection is still
// valid but individual eigenvectors are no longer identifiable.
inline constexpr double kDegenerateGapThreshold = 1e-10;

// Top-k eigenbasis of a covariance matrix. Columns are orthonormal
// eigenvectors ordered by descending eigenvalue. Each column's sign is fixed
// so that its entry of largest magnitude is positive, which makes bases
// reproducible across runs.
struct ProjectionBasis {
  Eigen::MatrixXd columns;      // d x k, orthonormal
  Eigen::VectorXd eigenvalues;  // k entries, descending
  int source_dim = 0;           // d
  int target_dim = 0;           // k
  // Set when the gap at k fell below kDegenerateGapThreshold (a warning is
  // also printed to stderr).
  bool degenerate_gap = false;
};

// Second-moment matrix of arbitrary row-stacked points. Uncentered form is
// sum x x^T / n; the centered variant subtracts the sample mean first.
// Accumulated as a single fixed-order matrix product so the result does not
// depend on any partitioning of the data.
Eigen::MatrixXd empirical_second_moment(const Eigen::MatrixXd& rows,
                                        bool centered);

// Covariance of an unlabelled dataset. Uncentered by default, matching the
// projection pipeline; the centered variant needs at least two points.
// Throws EmptyDatasetError.
Eigen::MatrixXd empirical_covariance(const UnlabeledDataset& data,
                                     bool centered = false);

// All eigenvalues of a symmetric matrix, descending.
Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& cov);

// Top-k eigenbasis via full symmetric eigendecomposition (the intended
// regime is d <= 4096, where a full solve is cheap). Requires max asymmetry
// <= 1e-10 and 1 <= k <= d. Throws NotSymmetricError / BadKError.
ProjectionBasis top_k_eigenbasis(const Eigen::MatrixXd& cov, int k);

// lambda_k - lambda_{k+1} for a descending spectrum (k is 1-based).
// Throws BadKError when k+1 exceeds the spectrum length.
double eigengap(const Eigen::VectorXd& descending_eigenvalues, int k);

// Low-rank separability defect 1 - ||A A^T w||_2, clamped to [0, 1].
// w must be a unit vector of the basis source dimension.
double estimate_xi(const ProjectionBasis& basis, const Eigen::VectorXd& w);

// Maps each point x to A^T x. Labels are carried through unchanged. The map
// is a contraction, so outputs stay inside the unit ball.
LabeledDataset project(const ProjectionBasis& basis, const LabeledDataset& data);
UnlabeledDataset project(const ProjectionBasis& basis,
                         const UnlabeledDataset& data);

}  // namespace pillar

#endif  // PILLAR_SPECTRAL_HPP_
