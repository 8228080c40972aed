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

#include "pillar/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace pillar {

Eigen::MatrixXd jl_matrix(int k, int d, Rng& rng) {
  Eigen::MatrixXd g(k, d);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  return g;
}

namespace {

Eigen::MatrixXd jl_apply(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const int d = static_cast<int>(points.cols());
  if (k < 1 || k > d) {
    throw BadKError("JL target dimension must lie in [1, d]");
  }
  const Eigen::MatrixXd g = jl_matrix(k, d, rng);
  Eigen::MatrixXd mapped =
      (points * g.transpose()) / std::sqrt(static_cast<double>(k));
  for (Eigen::Index i = 0; i < mapped.rows(); ++i) {
    const double norm = mapped.row(i).norm();
    if (norm > 1.0) mapped.row(i) /= norm;
  }
  return mapped;
}

}  // namespace

LabeledDataset jl_project(const LabeledDataset& data, int k, Rng& rng) {
  LabeledDataset out;
  out.points = jl_apply(data.points, k, rng);
  out.labels = data.labels;
  return out;
}

UnlabeledDataset jl_project(const UnlabeledDataset& data, int k, Rng& rng) {
  UnlabeledDataset out;
  out.points = jl_apply(data.points, k, rng);
  return out;
}

int MulticlassModel::predict(const Eigen::VectorXd& x) const {
  Eigen::Index best = 0;
  (weights * x).maxCoeff(&best);
  return classes[static_cast<std::size_t>(best)];
}

MulticlassModel multiclass_dp_sgd(const Eigen::MatrixXd& points,
                                  const std::vector<int>& labels,
                                  const SgdSchedule& schedule,
                                  double noise_multiplier, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (n == 0) throw EmptyDatasetError("multiclass_dp_sgd needs data");
  if (static_cast<int>(labels.size()) != n) {
    throw DimensionMismatchError("label count does not match point count");
  }
  if (schedule.steps < 1) throw BadScheduleError("steps must be at least 1");
  if (schedule.batch_size < 1 || schedule.batch_size > n) {
    throw BadScheduleError("batch size must lie in [1, n]");
  }
  if (noise_multiplier > 0.0 && schedule.clip_norm == kNoClipping) {
    throw BadScheduleError("noise requires a finite clip norm");
  }

  // Dense class index map.
  std::map<int, int> class_index;
  for (int label : labels) {
    class_index.emplace(label, 0);
  }
  MulticlassModel model;
  for (auto& [label, idx] : class_index) {
    idx = static_cast<int>(model.classes.size());
    model.classes.push_back(label);
  }
  const int c = static_cast<int>(model.classes.size());
  if (c < 2) throw ConfigError("need at least two classes");

  const double sampling_rate =
      static_cast<double>(schedule.batch_size) / static_cast<double>(n);
  const double noise_stddev = noise_multiplier * schedule.clip_norm;

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(c, d);
  Eigen::VectorXd logits(c);
  for (int t = 1; t <= schedule.steps; ++t) {
    Eigen::MatrixXd grad_sum = Eigen::MatrixXd::Zero(c, d);
    for (int i = 0; i < n; ++i) {
      if (sampling_rate < 1.0 && rng.uniform() >= sampling_rate) continue;
      const Eigen::VectorXd x = points.row(i);
      logits = w * x;
      const double max_logit = logits.maxCoeff();
      Eigen::VectorXd probs = (logits.array() - max_logit).exp();
      probs /= probs.sum();
      probs[class_index.at(labels[i])] -= 1.0;
      // Per-example gradient is the rank-1 matrix probs x^T; clip its
      // Frobenius norm, which is |probs| * |x|.
      const double norm = probs.norm() * x.norm();
      double scale = 1.0;
      if (norm > schedule.clip_norm) scale = schedule.clip_norm / norm;
      grad_sum += scale * probs * x.transpose();
    }
    if (noise_stddev > 0.0) {
      for (int r = 0; r < c; ++r) {
        grad_sum.row(r) += rng.normal_vector(d, noise_stddev).transpose();
      }
    }
    w -= schedule.learning_rate(t) * grad_sum /
         static_cast<double>(schedule.batch_size);
    const double frob = w.norm();
    if (frob > 1.0) w /= frob;
  }
  model.weights = w;
  return model;
}

double evaluate_multiclass(const MulticlassModel& model,
                           const Eigen::MatrixXd& points,
                           const std::vector<int>& labels) {
  if (points.rows() == 0) throw EmptyDatasetError("cannot evaluate on no data");
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (model.predict(points.row(i)) != labels[i]) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(points.rows());
}

}  // namespace pillar
