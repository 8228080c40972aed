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

#ifndef PILLAR_OPTIM_HPP_
#define PILLAR_OPTIM_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pillar/dataset.hpp"
#include "pillar/mechanisms.hpp"
#include "pillar/rng.hpp"

namespace pillar {

// Margin-scaled hinge loss max{1 - (y/zeta) <w, x>, 0}. 1/zeta-Lipschitz in w
// for ||x|| <= 1; per-point values lie in [0, 1 + 1/zeta] on the unit ball.
// At the kink the zero subgradient branch is taken.
class ScaledHingeLoss {
 public:
  explicit ScaledHingeLoss(double zeta);

  double zeta() const { return zeta_; }
  double lipschitz() const { return 1.0 / zeta_; }

  double loss(const Eigen::VectorXd& w, const Eigen::VectorXd& x, int y) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                           int y) const;

  double average_loss(const Eigen::VectorXd& w,
                      const LabeledDataset& data) const;

 private:
  double zeta_;
};

// w unchanged if ||w|| <= 1, else w/||w||.
Eigen::VectorXd project_unit_ball(const Eigen::VectorXd& w);

// Sentinel for "no clipping".
inline constexpr double kNoClipping = std::numeric_limits<double>::infinity();

struct SgdSchedule {
  int steps = 1000;
  // Learning rate as a function of the 1-based step index.
  std::function<double(int)> learning_rate;
  int batch_size = 128;        // DP-SGD only
  double clip_norm = 1.0;      // DP-SGD only; kNoClipping disables

  static SgdSchedule constant(int steps, double rate, int batch_size = 128,
                              double clip_norm = 1.0);
};

struct ABaseOptions {
  FormulaVariant variant = FormulaVariant::kPaperLiteral;
  // Test hook: bypass the calibrated noise (0 gives a noiseless run).
  std::optional<double> sigma_squared_override;
  // The m in eta(t) = 1/sqrt(t n^2 L^2 + m sigma^2); defaults to n.
  std::optional<double> learning_rate_m;
  // (n^2 - 1) steps are capped here to keep desk-scale runtime bounded.
  std::uint64_t step_cap = 1000000;
};

struct ABaseReport {
  double sigma_squared = 0.0;
  std::uint64_t steps = 0;
  bool capped = false;
  double max_iterate_norm = 0.0;  // over the whole run
};

// Single-sample noisy projected SGD (the Noisy-SGD base procedure): starts
// from a seeded uniform draw in the unit ball, runs n^2 - 1 steps of
//   w <- Pi( w - eta(t) [ n * grad_loss(w; (x,y)) + N(0, sigma^2 I) ] )
// with sigma^2 from calibrate_base_noise and eta(t) = 1/sqrt(t n^2 L^2 +
// m sigma^2). Sampling is uniform with replacement. Every iterate stays in
// the unit ball.
HalfspaceModel a_base(const LabeledDataset& data, double zeta, double epsilon,
                      double delta, Rng& rng, const ABaseOptions& options = {},
                      ABaseReport* report = nullptr);

// How the requested epsilon is divided between the repeated base runs and
// the exponential-mechanism selection. The printed allocation runs the base
// repeats at (eps/r, delta/r) *and* selects at eps, which totals 2 eps; the
// normalized mode rescales so the two stages sum to the requested budget.
struct BudgetSplit {
  enum class Mode { kNormalized, kPaperLiteral };
  Mode mode = Mode::kNormalized;
  double base_fraction = 0.5;  // used in normalized mode

  std::string to_string() const;
  static BudgetSplit from_string(const std::string& text);
};

struct NoisySgdReport {
  int base_runs = 0;
  std::size_t selected_index = 0;
  std::vector<double> candidate_losses;
  double epsilon_base_total = 0.0;
  double epsilon_select = 0.0;
  double sigma_squared = 0.0;
  std::uint64_t steps_per_run = 0;
  bool capped = false;
};

// Noisy-SGD: r = ceil(ln(1/beta)) base runs, each at (eps_base/r, delta/r),
// scored by average scaled hinge loss on `data`, and one exponential-
// mechanism selection at eps_select with sensitivity (1 + 1/zeta)/n.
HalfspaceModel a_noisy_sgd(const LabeledDataset& data, double zeta,
                           double epsilon, double delta, double beta,
                           const BudgetSplit& split, Rng& rng,
                           const ABaseOptions& options = {},
                           NoisySgdReport* report = nullptr);

enum class LossKind { kScaledHinge, kLogistic };

struct DpSgdStats {
  double max_clipped_grad_norm = 0.0;
  double max_iterate_norm = 0.0;
  std::uint64_t steps = 0;
};

// Minibatch DP-SGD: per step, a Poisson-sampled batch at rate
// batch_size / n, per-example gradients clipped to clip_norm, summed,
// perturbed with N(0, (noise_multiplier * clip_norm)^2 I), averaged by the
// nominal batch size, stepped and projected to the unit ball. Starts at 0;
// with zero noise, no clipping and a full batch the trajectory equals
// gd_baseline's exactly.
HalfspaceModel dp_sgd(const LabeledDataset& data, LossKind loss_kind,
                      double zeta, const SgdSchedule& schedule,
                      double noise_multiplier, Rng& rng,
                      DpSgdStats* stats = nullptr);

// Full-batch projected subgradient descent on the average scaled hinge loss
// with a constant learning rate, starting at 0.
HalfspaceModel gd_baseline(const LabeledDataset& data, double zeta, int steps,
                           double learning_rate);

}  // namespace pillar

#endif  // PILLAR_OPTIM_HPP_
