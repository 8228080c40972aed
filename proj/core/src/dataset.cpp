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

#include "pillar/dataset.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

namespace pillar {

void LabeledDataset::validate() const {
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw DimensionMismatchError("labels length " +
                                 std::to_string(labels.size()) +
                                 " does not match point count " +
                                 std::to_string(points.rows()));
  }
  for (int label : labels) {
    if (label != -1 && label != 1) {
      throw UnknownLabelError("label must be -1 or +1, got " +
                              std::to_string(label));
    }
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (points.row(i).norm() > 1.0 + kNormTolerance) {
      throw Error("point " + std::to_string(i) + " lies outside the unit ball");
    }
  }
}

void UnlabeledDataset::validate() const {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (points.row(i).norm() > 1.0 + kNormTolerance) {
      throw Error("point " + std::to_string(i) + " lies outside the unit ball");
    }
  }
}

void PrivacyBudget::validate() const {
  if (mode != PrivacyMode::kNonPrivate && !(epsilon > 0.0)) {
    throw BadBudgetError("epsilon must be positive");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw BadBudgetError("delta must lie in (0, 1)");
  }
}

const char* to_string(PrivacyMode mode) {
  switch (mode) {
    case PrivacyMode::kTheoreticalNoisySgd:
      return "theoretical-noisy-sgd";
    case PrivacyMode::kRdpDpSgd:
      return "rdp-dpsgd";
    case PrivacyMode::kNonPrivate:
      return "non-private";
  }
  return "unknown";
}

Eigen::MatrixXd normalize_to_unit_sphere(const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double norm = points.row(i).norm();
    if (norm < kZeroNormThreshold) {
      throw ZeroVectorError("cannot normalize zero vector at row " +
                            std::to_string(i));
    }
    // Rows already unit up to rounding stay untouched, which makes
    // normalization exactly idempotent.
    if (std::abs(norm - 1.0) <= 1e-14) {
      out.row(i) = points.row(i);
    } else {
      out.row(i) = points.row(i) / norm;
    }
  }
  return out;
}

std::pair<UnlabeledDataset, LabeledDataset> split_public_private(
    const LabeledDataset& dataset, double public_fraction, Rng& rng) {
  const auto n = static_cast<std::size_t>(dataset.size());
  const auto n_public = static_cast<std::size_t>(
      std::floor(public_fraction * static_cast<double>(n)));
  if (n_public < 1 || n_public > n - 1) {
    throw BadFractionError("public fraction " +
                           std::to_string(public_fraction) + " of " +
                           std::to_string(n) +
                           " points leaves an empty part");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  UnlabeledDataset pub;
  pub.points.resize(n_public, dataset.dim());
  LabeledDataset priv;
  priv.points.resize(n - n_public, dataset.dim());
  priv.labels.reserve(n - n_public);

  for (std::size_t i = 0; i < n_public; ++i) {
    pub.points.row(i) = dataset.points.row(order[i]);
  }
  for (std::size_t i = n_public; i < n; ++i) {
    priv.points.row(i - n_public) = dataset.points.row(order[i]);
    priv.labels.push_back(dataset.labels[order[i]]);
  }
  return {std::move(pub), std::move(priv)};
}

namespace internal {

void assert_in_unit_ball(const Eigen::MatrixXd& points) {
#ifndef NDEBUG
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    assert(points.row(i).norm() <= 1.0 + kNormTolerance);
  }
#else
  (void)points;
#endif
}

}  // namespace internal

}  // namespace pillar
