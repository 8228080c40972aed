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

#ifndef PILLAR_MECHANISMS_HPP_
#define PILLAR_MECHANISMS_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pillar/errors.hpp"
#include "pillar/rng.hpp"

namespace pillar {

// The Noisy-SGD noise variance as printed divides by epsilon; the original
// Bassily-Smith-Thakurta calibration divides by epsilon^2. Both are
// available and the chosen variant is recorded in every result artifact.
enum class FormulaVariant {
  kPaperLiteral,
  kBassilyOriginal,
};

const char* to_string(FormulaVariant variant);
FormulaVariant formula_variant_from_string(const std::string& name);

struct NoiseCalibration {
  double sigma_squared = 0.0;
  double lipschitz = 0.0;
  int n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  FormulaVariant variant = FormulaVariant::kPaperLiteral;
};

// Per-run Gaussian noise variance for the Noisy-SGD base procedure:
//   sigma^2 = 32 L^2 n^2 ln(n/delta) ln(1/delta) / epsilon   (paper-literal)
// with the Bassily-original variant dividing by epsilon^2 instead. Natural
// logarithms throughout. Throws BadBudgetError.
NoiseCalibration calibrate_base_noise(double lipschitz, int n, double epsilon,
                                      double delta, FormulaVariant variant);

// v + xi with xi ~ N(0, sigma_squared * I). sigma_squared = 0 returns v
// unchanged.
Eigen::VectorXd gaussian_perturb(const Eigen::VectorXd& v,
                                 double sigma_squared, Rng& rng);

// Worst-case change of the average scaled hinge loss when one example of n
// changes: (1 + 1/zeta) / n, since each per-point loss lies in [0, 1 + 1/zeta]
// for ||w|| <= 1, ||x|| <= 1. Throws BadZetaError.
double avg_hinge_sensitivity(double zeta, int n);

// Exponential mechanism over a candidate set scored by `utilities` (higher
// is better): index i is drawn with probability proportional to
// exp(epsilon * u_i / (2 * sensitivity)). Computed with max-shifted
// exponentials, so adding a constant to all utilities changes nothing.
// Throws EmptyCandidatesError / NonFiniteUtilityError.
std::size_t exponential_select(const std::vector<double>& utilities,
                               double epsilon, double sensitivity, Rng& rng);

// Renyi-DP curve: eps_at_order[i] is the RDP bound at orders[i]. Curves of
// composed mechanisms add pointwise.
struct RdpCurve {
  std::vector<double> orders;
  std::vector<double> eps_at_order;

  RdpCurve composed(int steps) const;
  // Standard conversion min_alpha [eps(alpha) + ln(1/delta) / (alpha - 1)].
  double to_epsilon(double delta) const;
};

// The order grid used by the accountant: {1.5, 2, 3, ..., 512}.
const std::vector<double>& rdp_order_grid();

// One step of the (possibly Poisson-subsampled) Gaussian mechanism with
// noise multiplier sigma and sampling rate q.
//
// For q = 1 this is the exact Gaussian-mechanism RDP, eps(alpha) =
// alpha / (2 sigma^2), evaluated on the full order grid. For q < 1 the
// standard Poisson-subsampling upper bound at integer orders is used:
//   eps(alpha) = log( sum_j C(alpha,j) (1-q)^(alpha-j) q^j
//                     exp(j(j-1)/(2 sigma^2)) ) / (alpha - 1),
// so the result is a valid upper bound (tightness is not the contract).
// Throws BadSigmaError.
RdpCurve subsampled_gaussian_rdp(double sigma, double sampling_rate);

// (eps, delta) upper bound after `steps` compositions.
double rdp_epsilon(double sigma, int steps, double sampling_rate,
                   double delta);

// Smallest noise multiplier (relative tolerance 1e-3) whose rdp_epsilon does
// not exceed target_epsilon. Throws UnreachableError if no sigma <= 1e6
// suffices.
double calibrate_dpsgd_sigma(double target_epsilon, double delta, int steps,
                             double sampling_rate);

}  // namespace pillar

#endif  // PILLAR_MECHANISMS_HPP_
