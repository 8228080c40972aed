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

#include "pillar/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pillar {

const char* to_string(FormulaVariant variant) {
  switch (variant) {
    case FormulaVariant::kPaperLiteral:
      return "paper-literal";
    case FormulaVariant::kBassilyOriginal:
      return "bassily-original";
  }
  return "unknown";
}

FormulaVariant formula_variant_from_string(const std::string& name) {
  if (name == "paper-literal") return FormulaVariant::kPaperLiteral;
  if (name == "bassily-original") return FormulaVariant::kBassilyOriginal;
  throw ConfigError("unknown formula variant '" + name + "'");
}

NoiseCalibration calibrate_base_noise(double lipschitz, int n, double epsilon,
                                      double delta, FormulaVariant variant) {
  if (!(epsilon > 0.0)) throw BadBudgetError("epsilon must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw BadBudgetError("delta must lie in (0, 1)");
  }
  if (n < 1) throw BadBudgetError("n must be at least 1");
  if (!(lipschitz > 0.0)) throw BadBudgetError("Lipschitz constant must be positive");

  const double nd = static_cast<double>(n);
  const double eps_divisor = variant == FormulaVariant::kPaperLiteral
                                 ? epsilon
                                 : epsilon * epsilon;
  NoiseCalibration calibration;
  calibration.sigma_squared = 32.0 * lipschitz * lipschitz * nd * nd *
                              std::log(nd / delta) * std::log(1.0 / delta) /
                              eps_divisor;
  calibration.lipschitz = lipschitz;
  calibration.n = n;
  calibration.epsilon = epsilon;
  calibration.delta = delta;
  calibration.variant = variant;
  return calibration;
}

Eigen::VectorXd gaussian_perturb(const Eigen::VectorXd& v,
                                 double sigma_squared, Rng& rng) {
  if (sigma_squared == 0.0) return v;
  return v + rng.normal_vector(static_cast<int>(v.size()),
                               std::sqrt(sigma_squared));
}

double avg_hinge_sensitivity(double zeta, int n) {
  if (!(zeta > 0.0)) throw BadZetaError("zeta must be positive");
  if (n < 1) throw BadZetaError("n must be at least 1");
  return (1.0 + 1.0 / zeta) / static_cast<double>(n);
}

std::size_t exponential_select(const std::vector<double>& utilities,
                               double epsilon, double sensitivity, Rng& rng) {
  if (utilities.empty()) throw EmptyCandidatesError("no candidates");
  double max_utility = -std::numeric_limits<double>::infinity();
  for (double u : utilities) {
    if (!std::isfinite(u)) throw NonFiniteUtilityError("utility is not finite");
    max_utility = std::max(max_utility, u);
  }

  // Shift by the max before exponentiating; the shift cancels in the
  // normalization, so selection probabilities are unchanged.
  const double scale = epsilon / (2.0 * sensitivity);
  std::vector<double> weights(utilities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    weights[i] = std::exp(scale * (utilities[i] - max_utility));
    total += weights[i];
  }

  const double threshold = rng.uniform() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (threshold < cumulative) return i;
  }
  return weights.size() - 1;
}

RdpCurve RdpCurve::composed(int steps) const {
  RdpCurve out;
  out.orders = orders;
  out.eps_at_order.reserve(eps_at_order.size());
  for (double eps : eps_at_order) {
    out.eps_at_order.push_back(eps * static_cast<double>(steps));
  }
  return out;
}

double RdpCurve::to_epsilon(double delta) const {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw BadBudgetError("delta must lie in (0, 1)");
  }
  double best = std::numeric_limits<double>::infinity();
  const double log_inv_delta = std::log(1.0 / delta);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    best = std::min(best, eps_at_order[i] + log_inv_delta / (orders[i] - 1.0));
  }
  return best;
}

const std::vector<double>& rdp_order_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    g.push_back(1.5);
    for (int alpha = 2; alpha <= 512; ++alpha) {
      g.push_back(static_cast<double>(alpha));
    }
    return g;
  }();
  return grid;
}

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// log of the binomial-expansion moment for the Poisson-subsampled Gaussian
// mechanism at integer order alpha:
//   log sum_{j=0}^{alpha} C(alpha, j) (1-q)^(alpha-j) q^j exp(j(j-1)/(2s^2)).
double log_subsampled_moment(int alpha, double q, double sigma) {
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  double acc = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= alpha; ++j) {
    const double log_binom = std::lgamma(alpha + 1.0) - std::lgamma(j + 1.0) -
                             std::lgamma(alpha - j + 1.0);
    const double term = log_binom + j * log_q + (alpha - j) * log_1mq +
                        (static_cast<double>(j) * (j - 1)) /
                            (2.0 * sigma * sigma);
    acc = log_add(acc, term);
  }
  return acc;
}

}  // namespace

RdpCurve subsampled_gaussian_rdp(double sigma, double sampling_rate) {
  if (!(sigma > 0.0)) throw BadSigmaError("noise multiplier must be positive");
  if (!(sampling_rate > 0.0) || sampling_rate > 1.0) {
    throw BadSigmaError("sampling rate must lie in (0, 1]");
  }

  RdpCurve curve;
  for (double alpha : rdp_order_grid()) {
    double eps;
    if (sampling_rate == 1.0) {
      eps = alpha / (2.0 * sigma * sigma);
    } else {
      // Subsampling bound is available at integer orders only.
      const double rounded = std::round(alpha);
      if (std::abs(alpha - rounded) > 1e-12 || rounded < 2.0) continue;
      const int int_alpha = static_cast<int>(rounded);
      eps = log_subsampled_moment(int_alpha, sampling_rate, sigma) /
            (alpha - 1.0);
    }
    curve.orders.push_back(alpha);
    curve.eps_at_order.push_back(eps);
  }
  return curve;
}

double rdp_epsilon(double sigma, int steps, double sampling_rate,
                   double delta) {
  if (steps < 1) throw BadSigmaError("steps must be at least 1");
  return subsampled_gaussian_rdp(sigma, sampling_rate)
      .composed(steps)
      .to_epsilon(delta);
}

double calibrate_dpsgd_sigma(double target_epsilon, double delta, int steps,
                             double sampling_rate) {
  if (!(target_epsilon > 0.0)) {
    throw BadBudgetError("target epsilon must be positive");
  }
  constexpr double kSigmaCeiling = 1e6;
  constexpr double kRelativeTolerance = 1e-3;

  // Exponential search for a bracket [lo, hi] with eps(lo) > target >= eps(hi).
  double hi = 1.0;
  while (rdp_epsilon(hi, steps, sampling_rate, delta) > target_epsilon) {
    hi *= 2.0;
    if (hi > kSigmaCeiling) {
      throw UnreachableError("no noise multiplier <= 1e6 reaches epsilon " +
                             std::to_string(target_epsilon));
    }
  }
  double lo = hi / 2.0;
  while (lo > 1e-6 &&
         rdp_epsilon(lo, steps, sampling_rate, delta) <= target_epsilon) {
    hi = lo;
    lo /= 2.0;
  }

  while (hi - lo > kRelativeTolerance * lo) {
    const double mid = 0.5 * (lo + hi);
    if (rdp_epsilon(mid, steps, sampling_rate, delta) <= target_epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace pillar
