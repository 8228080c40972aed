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

#include <doctest.h>

#include <Eigen/QR>

#include "pillar/synthdata.hpp"

namespace {

using namespace pillar;

Eigen::MatrixXd random_orthonormal(int d, Rng& rng) {
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

// Distance between the subspaces spanned by two orthonormal column sets.
double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a * a.transpose() - b * b.transpose()).norm();
}

TEST_CASE("covariance of a single basis point is a rank-1 outer product") {
  UnlabeledDataset data;
  data.points = Eigen::MatrixXd::Zero(1, 3);
  data.points(0, 0) = 1.0;
  const Eigen::MatrixXd cov = empirical_covariance(data, false);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = 1.0;
  CHECK(cov == expected);
}

TEST_CASE("signs cancel in the uncentered outer product") {
  UnlabeledDataset data;
  data.points = Eigen::MatrixXd::Zero(2, 3);
  data.points(0, 0) = 1.0;
  data.points(1, 0) = -1.0;
  const Eigen::MatrixXd cov = empirical_covariance(data, false);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = 1.0;
  CHECK((cov - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariance preconditions") {
  UnlabeledDataset empty;
  empty.points.resize(0, 3);
  CHECK_THROWS_AS(empirical_covariance(empty, false), EmptyDatasetError);
  UnlabeledDataset one;
  one.points = Eigen::MatrixXd::Zero(1, 3);
  one.points(0, 0) = 1.0;
  CHECK_THROWS_AS(empirical_covariance(one, true), EmptyDatasetError);
  CHECK_NOTHROW(empirical_covariance(one, false));
}

TEST_CASE("empirical second moment of 1e5 GMM draws matches the analytic one") {
  const GmmSpec spec = GmmSpec::axis_aligned(10, 0.2, 0.05);
  Rng rng(2024);
  const GmmSample sample = sample_gmm(spec, 100000, rng);
  const Eigen::MatrixXd empirical =
      empirical_second_moment(sample.raw_points, false);
  const Eigen::MatrixXd analytic = gmm_population_covariance(spec);
  const Eigen::MatrixXd diff = empirical - analytic;
  // Operator norm via the symmetric eigensolver.
  const Eigen::VectorXd eigs = sorted_eigenvalues((diff + diff.transpose()) / 2.0);
  const double op_norm = std::max(std::abs(eigs[0]), std::abs(eigs[eigs.size() - 1]));
  CHECK(op_norm <= 0.02);
}

TEST_CASE("diagonal matrix eigenbasis") {
  Eigen::MatrixXd cov = Eigen::Vector3d(3.0, 2.0, 1.0).asDiagonal();
  const ProjectionBasis basis = top_k_eigenbasis(cov, 2);
  CHECK(basis.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(basis.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(basis.columns(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(basis.columns(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(basis.degenerate_gap);
}

TEST_CASE("identity matrix flags a degenerate gap") {
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
  const ProjectionBasis basis = top_k_eigenbasis(cov, 1);
  CHECK(basis.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(basis.columns.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(basis.degenerate_gap);
}

TEST_CASE("eigenbasis rejects asymmetry and bad k") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 1e-3, -1e-3, 1.0;
  CHECK_THROWS_AS(top_k_eigenbasis(bad, 1), NotSymmetricError);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(top_k_eigenbasis(eye, 0), BadKError);
  CHECK_THROWS_AS(top_k_eigenbasis(eye, 4), BadKError);
}

TEST_CASE("GMM analytic covariance gives the known top-2 structure") {
  const GmmSpec spec = GmmSpec::axis_aligned(6, 0.2, 0.05);
  const Eigen::MatrixXd cov = gmm_population_covariance(spec);
  const ProjectionBasis basis = top_k_eigenbasis(cov, 2);
  CHECK(basis.eigenvalues[0] == doctest::Approx(1.05).epsilon(1e-12));
  CHECK(basis.eigenvalues[1] == doctest::Approx(0.25).epsilon(1e-12));

  Eigen::MatrixXd truth(6, 2);
  truth.col(0) = spec.mu;
  truth.col(1) = spec.w_tilde;
  CHECK(subspace_distance(basis.columns, truth) <= 1e-8);
}

TEST_CASE("eigengap basics and the GMM value") {
  Eigen::VectorXd eigs(3);
  eigs << 3.0, 2.0, 1.0;
  CHECK(eigengap(eigs, 1) == 1.0);
  CHECK_THROWS_AS(eigengap(eigs, 3), BadKError);

  const GmmSpec spec = GmmSpec::axis_aligned(5, 0.2, 0.05);
  const Eigen::VectorXd spectrum =
      sorted_eigenvalues(gmm_population_covariance(spec));
  CHECK(eigengap(spectrum, 2) == doctest::Approx(0.2).epsilon(1e-12));

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 2.5);
  CHECK(eigengap(flat, 2) == 0.0);
}

TEST_CASE("estimate_xi on basis members, orthogonal vectors, and mixtures") {
  Eigen::MatrixXd cov = Eigen::Vector3d(3.0, 2.0, 1.0).asDiagonal();
  const ProjectionBasis basis = top_k_eigenbasis(cov, 2);

  CHECK(estimate_xi(basis, basis.columns.col(0)) == doctest::Approx(0.0));
  CHECK(estimate_xi(basis, Eigen::Vector3d(0.0, 0.0, 1.0)) ==
        doctest::Approx(1.0));
  CHECK(estimate_xi(basis, Eigen::Vector3d(0.6, 0.0, 0.8)) ==
        doctest::Approx(0.4).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_xi(basis, Eigen::Vector2d(1.0, 0.0)),
                  DimensionMismatchError);
}

TEST_CASE("xi shrinks as columns are added") {
  Rng rng(31);
  const int d = 8;
  const Eigen::MatrixXd q = random_orthonormal(d, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd w = rng.unit_sphere(d);
    double previous = 2.0;
    for (int k = 1; k <= d; ++k) {
      ProjectionBasis basis;
      basis.columns = q.leftCols(k);
      basis.eigenvalues = Eigen::VectorXd::Ones(k);
      basis.source_dim = d;
      basis.target_dim = k;
      const double xi = estimate_xi(basis, w);
      CHECK(xi <= previous + 1e-12);
      previous = xi;
    }
  }
}

TEST_CASE("projection with identity-like basis is the identity") {
  Rng rng(5);
  LabeledDataset data;
  data.points.resize(4, 3);
  for (int i = 0; i < 4; ++i) data.points.row(i) = rng.unit_sphere(3);
  data.labels = {1, -1, 1, -1};

  ProjectionBasis basis;
  basis.columns = Eigen::MatrixXd::Identity(3, 3);
  basis.eigenvalues = Eigen::VectorXd::Ones(3);
  basis.source_dim = 3;
  basis.target_dim = 3;
  const LabeledDataset projected = project(basis, data);
  CHECK(projected.points == data.points);
  CHECK(projected.labels == data.labels);
}

TEST_CASE("projection onto e1 picks the first coordinate") {
  ProjectionBasis basis;
  basis.columns = Eigen::MatrixXd::Zero(2, 1);
  basis.columns(0, 0) = 1.0;
  basis.eigenvalues = Eigen::VectorXd::Ones(1);
  basis.source_dim = 2;
  basis.target_dim = 1;

  UnlabeledDataset data;
  data.points.resize(1, 2);
  data.points << 0.6, 0.8;
  const UnlabeledDataset projected = project(basis, data);
  CHECK(projected.points(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("full-rank orthonormal projection preserves norms") {
  Rng rng(17);
  const int d = 7;
  ProjectionBasis basis;
  basis.columns = random_orthonormal(d, rng);
  basis.eigenvalues = Eigen::VectorXd::Ones(d);
  basis.source_dim = d;
  basis.target_dim = d;

  UnlabeledDataset data;
  data.points.resize(30, d);
  for (int i = 0; i < 30; ++i) data.points.row(i) = rng.unit_ball(d).transpose();
  const UnlabeledDataset projected = project(basis, data);
  for (int i = 0; i < 30; ++i) {
    CHECK(projected.points.row(i).norm() ==
          doctest::Approx(data.points.row(i).norm()).epsilon(1e-9));
  }
}

TEST_CASE("projection dimension mismatch") {
  ProjectionBasis basis;
  basis.columns = Eigen::MatrixXd::Identity(3, 2);
  basis.eigenvalues = Eigen::VectorXd::Ones(2);
  basis.source_dim = 3;
  basis.target_dim = 2;
  UnlabeledDataset data;
  data.points = Eigen::MatrixXd::Zero(1, 4);
  CHECK_THROWS_AS(project(basis, data), DimensionMismatchError);
}

TEST_CASE("produced bases are orthonormal with small eigen-residuals") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 12;
    Eigen::MatrixXd x(60, d);
    for (int i = 0; i < 60; ++i) x.row(i) = rng.unit_sphere(d);
    const Eigen::MatrixXd cov = empirical_second_moment(x, false);
    const int k = 1 + static_cast<int>(rng.uniform_index(d));
    const ProjectionBasis basis = top_k_eigenbasis(cov, k);

    const Eigen::MatrixXd gram =
        basis.columns.transpose() * basis.columns -
        Eigen::MatrixXd::Identity(k, k);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-8);

    for (int j = 0; j < k; ++j) {
      const double residual =
          (cov * basis.columns.col(j) -
           basis.eigenvalues[j] * basis.columns.col(j))
              .norm();
      CHECK(residual <= 1e-7);
    }

    // Contraction.
    for (int i = 0; i < 60; ++i) {
      CHECK((x.row(i) * basis.columns).norm() <= x.row(i).norm() + 1e-12);
    }
  }
}

TEST_CASE("basis signs are deterministic across equivalent solves") {
  Rng rng(7);
  Eigen::MatrixXd x(40, 5);
  for (int i = 0; i < 40; ++i) x.row(i) = rng.unit_sphere(5);
  const Eigen::MatrixXd cov = empirical_second_moment(x, false);
  const ProjectionBasis a = top_k_eigenbasis(cov, 3);
  const ProjectionBasis b = top_k_eigenbasis(cov, 3);
  CHECK(a.columns == b.columns);
  for (int j = 0; j < 3; ++j) {
    Eigen::Index argmax = 0;
    a.columns.col(j).cwiseAbs().maxCoeff(&argmax);
    CHECK(a.columns(argmax, j) > 0.0);
  }
}

}  // namespace
