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

#include "pillar/optim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iostream>
#include <string>

namespace pillar {

ScaledHingeLoss::ScaledHingeLoss(double zeta) : zeta_(zeta) {
  if (!(zeta > 0.0)) throw BadZetaError("zeta must be positive");
}

double ScaledHingeLoss::loss(const Eigen::VectorXd& w,
                             const Eigen::VectorXd& x, int y) const {
  const double margin = 1.0 - (static_cast<double>(y) / zeta_) * w.dot(x);
  return std::max(margin, 0.0);
}

Eigen::VectorXd ScaledHingeLoss::gradient(const Eigen::VectorXd& w,
                                          const Eigen::VectorXd& x,
                                          int y) const {
  const double margin = 1.0 - (static_cast<double>(y) / zeta_) * w.dot(x);
  if (margin > 0.0) {
    return -(static_cast<double>(y) / zeta_) * x;
  }
  return Eigen::VectorXd::Zero(w.size());
}

double ScaledHingeLoss::average_loss(const Eigen::VectorXd& w,
                                     const LabeledDataset& data) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    total += loss(w, data.points.row(i), data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

Eigen::VectorXd project_unit_ball(const Eigen::VectorXd& w) {
  double norm = w.norm();
  if (norm <= 1.0) return w;
  // Rounding can leave the quotient a hair above 1; dividing again strictly
  // shrinks it, so the loop terminates and the result is a fixed point.
  Eigen::VectorXd out = w;
  while (norm > 1.0) {
    out /= norm;
    norm = out.norm();
  }
  return out;
}

SgdSchedule SgdSchedule::constant(int steps, double rate, int batch_size,
                                  double clip_norm) {
  SgdSchedule schedule;
  schedule.steps = steps;
  schedule.learning_rate = [rate](int) { return rate; };
  schedule.batch_size = batch_size;
  schedule.clip_norm = clip_norm;
  return schedule;
}

HalfspaceModel a_base(const LabeledDataset& data, double zeta, double epsilon,
                      double delta, Rng& rng, const ABaseOptions& options,
                      ABaseReport* report) {
  if (data.size() == 0) throw EmptyDatasetError("a_base needs data");
  const int n = static_cast<int>(data.size());
  const int dim = static_cast<int>(data.dim());
  const ScaledHingeLoss loss(zeta);
  const double lipschitz = loss.lipschitz();

  double sigma_squared;
  if (options.sigma_squared_override.has_value()) {
    sigma_squared = *options.sigma_squared_override;
  } else {
    sigma_squared =
        calibrate_base_noise(lipschitz, n, epsilon, delta, options.variant)
            .sigma_squared;
  }
  const double sigma = std::sqrt(sigma_squared);

  const double nd = static_cast<double>(n);
  const double m = options.learning_rate_m.value_or(nd);

  std::uint64_t steps = static_cast<std::uint64_t>(nd * nd) - 1;
  bool capped = false;
  if (steps > options.step_cap) {
    steps = options.step_cap;
    capped = true;
    if (n > 1000) {
      std::cerr << "pillar: warning: a_base step count (n^2 - 1) capped at "
                << options.step_cap << " for n = " << n << "\n";
    }
  }

  Eigen::VectorXd w = project_unit_ball(rng.unit_ball(dim));
  double max_iterate_norm = w.norm();
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const std::size_t idx = rng.uniform_index(static_cast<std::size_t>(n));
    Eigen::VectorXd update =
        nd * loss.gradient(w, data.points.row(idx), data.labels[idx]);
    if (sigma_squared > 0.0) {
      update += rng.normal_vector(dim, sigma);
    }
    const double eta =
        1.0 / std::sqrt(static_cast<double>(t) * nd * nd * lipschitz *
                            lipschitz +
                        m * sigma_squared);
    w = project_unit_ball(w - eta * update);
    max_iterate_norm = std::max(max_iterate_norm, w.norm());
    assert(w.norm() <= 1.0 + kNormTolerance);
  }

  if (report != nullptr) {
    report->sigma_squared = sigma_squared;
    report->steps = steps;
    report->capped = capped;
    report->max_iterate_norm = max_iterate_norm;
  }
  return HalfspaceModel{w};
}

std::string BudgetSplit::to_string() const {
  if (mode == Mode::kPaperLiteral) return "paper-literal";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "normalized:%g", base_fraction);
  return buf;
}

BudgetSplit BudgetSplit::from_string(const std::string& text) {
  BudgetSplit split;
  if (text == "paper-literal") {
    split.mode = Mode::kPaperLiteral;
    return split;
  }
  const std::string prefix = "normalized:";
  if (text.rfind(prefix, 0) == 0) {
    split.mode = Mode::kNormalized;
    split.base_fraction = std::stod(text.substr(prefix.size()));
    if (!(split.base_fraction > 0.0) || !(split.base_fraction < 1.0)) {
      throw ConfigError("budget split fraction must lie in (0, 1)");
    }
    return split;
  }
  throw ConfigError("unknown budget split '" + text + "'");
}

HalfspaceModel a_noisy_sgd(const LabeledDataset& data, double zeta,
                           double epsilon, double delta, double beta,
                           const BudgetSplit& split, Rng& rng,
                           const ABaseOptions& options,
                           NoisySgdReport* report) {
  if (data.size() == 0) throw EmptyDatasetError("a_noisy_sgd needs data");
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw BadBudgetError("beta must lie in (0, 1)");
  }

  // ceil(ln(1/beta)) repeats; the tiny slack keeps exact integer arguments
  // (beta = e^-3 and friends) from rounding up a step.
  const int repeats = std::max(
      1, static_cast<int>(std::ceil(std::log(1.0 / beta) - 1e-12)));

  double epsilon_base_total;
  double epsilon_select;
  if (split.mode == BudgetSplit::Mode::kPaperLiteral) {
    epsilon_base_total = epsilon;
    epsilon_select = epsilon;
  } else {
    epsilon_base_total = split.base_fraction * epsilon;
    epsilon_select = (1.0 - split.base_fraction) * epsilon;
  }

  const ScaledHingeLoss loss(zeta);
  std::vector<HalfspaceModel> candidates;
  std::vector<double> utilities;
  std::vector<double> losses;
  candidates.reserve(repeats);
  ABaseReport base_report;
  for (int i = 0; i < repeats; ++i) {
    Rng run_rng(rng.next_u64());
    candidates.push_back(a_base(data, zeta,
                                epsilon_base_total / repeats,
                                delta / repeats, run_rng, options,
                                &base_report));
    const double avg = loss.average_loss(candidates.back().weights, data);
    losses.push_back(avg);
    utilities.push_back(-avg);
  }

  const double sensitivity =
      avg_hinge_sensitivity(zeta, static_cast<int>(data.size()));
  const std::size_t chosen =
      exponential_select(utilities, epsilon_select, sensitivity, rng);

  if (report != nullptr) {
    report->base_runs = repeats;
    report->selected_index = chosen;
    report->candidate_losses = losses;
    report->epsilon_base_total = epsilon_base_total;
    report->epsilon_select = epsilon_select;
    report->sigma_squared = base_report.sigma_squared;
    report->steps_per_run = base_report.steps;
    report->capped = base_report.capped;
  }
  return candidates[chosen];
}

namespace {

Eigen::VectorXd loss_gradient(LossKind kind, const ScaledHingeLoss& hinge,
                              const Eigen::VectorXd& w,
                              const Eigen::VectorXd& x, int y) {
  if (kind == LossKind::kScaledHinge) return hinge.gradient(w, x, y);
  // Logistic: -y x sigmoid(-y <w, x>).
  const double margin = static_cast<double>(y) * w.dot(x);
  const double weight = 1.0 / (1.0 + std::exp(margin));
  return (-static_cast<double>(y) * weight) * x;
}

}  // namespace

HalfspaceModel dp_sgd(const LabeledDataset& data, LossKind loss_kind,
                      double zeta, const SgdSchedule& schedule,
                      double noise_multiplier, Rng& rng, DpSgdStats* stats) {
  const int n = static_cast<int>(data.size());
  if (n == 0) throw EmptyDatasetError("dp_sgd needs data");
  if (schedule.steps < 1) throw BadScheduleError("steps must be at least 1");
  if (schedule.batch_size < 1 || schedule.batch_size > n) {
    throw BadScheduleError("batch size must lie in [1, n]");
  }
  if (!(schedule.clip_norm > 0.0)) {
    throw BadScheduleError("clip norm must be positive");
  }
  if (noise_multiplier < 0.0) {
    throw BadScheduleError("noise multiplier must be non-negative");
  }
  if (noise_multiplier > 0.0 && schedule.clip_norm == kNoClipping) {
    throw BadScheduleError("noise requires a finite clip norm");
  }
  if (!schedule.learning_rate) {
    throw BadScheduleError("schedule has no learning rate");
  }

  const ScaledHingeLoss hinge(loss_kind == LossKind::kScaledHinge ? zeta : 1.0);
  const int dim = static_cast<int>(data.dim());
  const double sampling_rate =
      static_cast<double>(schedule.batch_size) / static_cast<double>(n);
  const double noise_stddev = noise_multiplier * schedule.clip_norm;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  double max_clipped_norm = 0.0;
  double max_iterate_norm = 0.0;
  for (int t = 1; t <= schedule.steps; ++t) {
    Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < n; ++i) {
      if (sampling_rate < 1.0 && rng.uniform() >= sampling_rate) continue;
      Eigen::VectorXd g =
          loss_gradient(loss_kind, hinge, w, data.points.row(i),
                        data.labels[i]);
      const double norm = g.norm();
      if (norm > schedule.clip_norm) {
        g *= schedule.clip_norm / norm;
      }
      assert(g.norm() <= schedule.clip_norm * (1.0 + 1e-12));
      max_clipped_norm = std::max(max_clipped_norm, g.norm());
      grad_sum += g;
    }
    if (noise_stddev > 0.0) {
      grad_sum += rng.normal_vector(dim, noise_stddev);
    }
    const Eigen::VectorXd step =
        grad_sum / static_cast<double>(schedule.batch_size);
    w = project_unit_ball(w - schedule.learning_rate(t) * step);
    max_iterate_norm = std::max(max_iterate_norm, w.norm());
    assert(w.norm() <= 1.0 + kNormTolerance);
  }

  if (stats != nullptr) {
    stats->max_clipped_grad_norm = max_clipped_norm;
    stats->max_iterate_norm = max_iterate_norm;
    stats->steps = static_cast<std::uint64_t>(schedule.steps);
  }
  return HalfspaceModel{w};
}

HalfspaceModel gd_baseline(const LabeledDataset& data, double zeta, int steps,
                           double learning_rate) {
  if (data.size() == 0) throw EmptyDatasetError("gd_baseline needs data");
  if (steps < 1) throw BadScheduleError("steps must be at least 1");

  const ScaledHingeLoss loss(zeta);
  const int n = static_cast<int>(data.size());
  const int dim = static_cast<int>(data.dim());

  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  for (int t = 1; t <= steps; ++t) {
    Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < n; ++i) {
      grad_sum += loss.gradient(w, data.points.row(i), data.labels[i]);
    }
    const Eigen::VectorXd step = grad_sum / static_cast<double>(n);
    w = project_unit_ball(w - learning_rate * step);
  }
  return HalfspaceModel{w};
}

}  // namespace pillar
