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

#ifndef PILLAR_BASELINES_HPP_
#define PILLAR_BASELINES_HPP_

#include <vector>

#include <Eigen/Core>

#include "pillar/dataset.hpp"
#include "pillar/optim.hpp"
#include "pillar/rng.hpp"

namespace pillar {

// The k x d Gaussian random matrix behind the JL baseline. Drawn row-major,
// so a copy of the rng reproduces the same matrix.
Eigen::MatrixXd jl_matrix(int k, int d, Rng& rng);

// Johnson-Lindenstrauss baseline: maps every point to (1/sqrt(k)) G x with
// one shared G of i.i.d. standard Gaussians per call, carries labels, and
// projects outputs back into the unit ball. Requires k <= d; throws
// BadKError.
LabeledDataset jl_project(const LabeledDataset& data, int k, Rng& rng);
UnlabeledDataset jl_project(const UnlabeledDataset& data, int k, Rng& rng);

// Multiclass softmax classifier trained with clipped DP-SGD. This is a
// harness extension for ingested multiclass feature files; the binary scaled
// hinge pipeline is the theory-backed path.
struct MulticlassModel {
  Eigen::MatrixXd weights;  // n_classes x d, Frobenius norm <= 1
  std::vector<int> classes;

  int predict(const Eigen::VectorXd& x) const;
};

MulticlassModel multiclass_dp_sgd(const Eigen::MatrixXd& points,
                                  const std::vector<int>& labels,
                                  const SgdSchedule& schedule,
                                  double noise_multiplier, Rng& rng);

// Multiclass 0-1 error.
double evaluate_multiclass(const MulticlassModel& model,
                           const Eigen::MatrixXd& points,
                           const std::vector<int>& labels);

}  // namespace pillar

#endif  // PILLAR_BASELINES_HPP_
