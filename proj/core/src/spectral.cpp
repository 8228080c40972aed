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

#include "pillar/spectral.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iostream>
#include <string>

#include <Eigen/Eigenvalues>

namespace pillar {
namespace {

constexpr double kSymmetryTolerance = 1e-10;

void fix_column_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Eigen::Index argmax = 0;
    columns.col(j).cwiseAbs().maxCoeff(&argmax);
    if (columns(argmax, j) < 0.0) columns.col(j) = -columns.col(j);
  }
}

}  // namespace

Eigen::MatrixXd empirical_second_moment(const Eigen::MatrixXd& rows,
                                        bool centered) {
  const Eigen::Index n = rows.rows();
  if (n < 1 || (centered && n < 2)) {
    throw EmptyDatasetError("covariance needs at least " +
                            std::string(centered ? "2 points" : "1 point"));
  }
  if (centered) {
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    const Eigen::MatrixXd shifted = rows.rowwise() - mean;
    return (shifted.transpose() * shifted) / static_cast<double>(n);
  }
  return (rows.transpose() * rows) / static_cast<double>(n);
}

Eigen::MatrixXd empirical_covariance(const UnlabeledDataset& data,
                                     bool centered) {
  internal::assert_in_unit_ball(data.points);
  return empirical_second_moment(data.points, centered);
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      cov, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

ProjectionBasis top_k_eigenbasis(const Eigen::MatrixXd& cov, int k) {
  const Eigen::Index d = cov.rows();
  if (cov.cols() != d) {
    throw NotSymmetricError("matrix is not square");
  }
  const double asymmetry = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTolerance) {
    throw NotSymmetricError("matrix asymmetry " + std::to_string(asymmetry) +
                            " exceeds tolerance");
  }
  if (k < 1 || k > d) {
    throw BadKError("k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(d) + "]");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed to converge");
  }

  // Eigen returns ascending order; take the top k, descending.
  ProjectionBasis basis;
  basis.source_dim = static_cast<int>(d);
  basis.target_dim = k;
  basis.columns.resize(d, k);
  basis.eigenvalues.resize(k);
  for (int j = 0; j < k; ++j) {
    const Eigen::Index src = d - 1 - j;
    basis.columns.col(j) = solver.eigenvectors().col(src);
    double value = solver.eigenvalues()[src];
    if (value < 0.0 && value > -kSymmetryTolerance) value = 0.0;
    basis.eigenvalues[j] = value;
  }
  fix_column_signs(basis.columns);

  if (k < d) {
    const double gap = basis.eigenvalues[k - 1] - solver.eigenvalues()[d - 1 - k];
    if (gap < kDegenerateGapThreshold) {
      basis.degenerate_gap = true;
      std::cerr << "pillar: warning: eigengap at k=" << k << " is " << gap
                << "; eigenvectors are not identifiable\n";
    }
  }
  return basis;
}

double eigengap(const Eigen::VectorXd& descending_eigenvalues, int k) {
  if (k < 1 || k + 1 > descending_eigenvalues.size()) {
    throw BadKError("eigengap needs at least k+1 eigenvalues, got " +
                    std::to_string(descending_eigenvalues.size()) +
                    " for k = " + std::to_string(k));
  }
  return std::max(0.0,
                  descending_eigenvalues[k - 1] - descending_eigenvalues[k]);
}

double estimate_xi(const ProjectionBasis& basis, const Eigen::VectorXd& w) {
  if (w.size() != basis.source_dim) {
    throw DimensionMismatchError("w has dimension " + std::to_string(w.size()) +
                                 ", basis expects " +
                                 std::to_string(basis.source_dim));
  }
  assert(std::abs(w.norm() - 1.0) <= kNormTolerance);
  // ||A A^T w|| = ||A^T w|| for orthonormal columns.
  const double projected = (basis.columns.transpose() * w).norm();
  return std::clamp(1.0 - projected, 0.0, 1.0);
}

namespace {

Eigen::MatrixXd project_points(const ProjectionBasis& basis,
                               const Eigen::MatrixXd& points) {
  if (points.cols() != basis.source_dim) {
    throw DimensionMismatchError(
        "data dimension " + std::to_string(points.cols()) +
        " does not match basis source dimension " +
        std::to_string(basis.source_dim));
  }
  return points * basis.columns;
}

}  // namespace

LabeledDataset project(const ProjectionBasis& basis,
                       const LabeledDataset& data) {
  LabeledDataset out;
  out.points = project_points(basis, data.points);
  out.labels = data.labels;
  internal::assert_in_unit_ball(out.points);
  return out;
}

UnlabeledDataset project(const ProjectionBasis& basis,
                         const UnlabeledDataset& data) {
  UnlabeledDataset out;
  out.points = project_points(basis, data.points);
  internal::assert_in_unit_ball(out.points);
  return out;
}

}  // namespace pillar
