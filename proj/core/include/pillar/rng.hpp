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

#ifndef PILLAR_RNG_HPP_
#define PILLAR_RNG_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace pillar {

// Seeded random stream (xoshiro256++ seeded through splitmix64).
//
// The generator is self-contained so that draw sequences are identical across
// platforms and standard-library versions. Child streams are derived from the
// *original* seed and an index, never from the current position, so
// `rng.child(i)` is the same stream no matter how much has been drawn from
// `rng`. Sweep workers rely on this to get independent per-cell streams from
// (master seed, cell index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Independent stream keyed by (seed(), index).
  Rng child(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1).
  double uniform();

  // Uniform on {0, ..., n-1}; unbiased via rejection. n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Standard normal via Box-Muller (second value cached).
  double normal();

  Eigen::VectorXd normal_vector(int dim, double stddev = 1.0);

  // Uniform on the unit sphere / inside the unit ball.
  Eigen::VectorXd unit_sphere(int dim);
  Eigen::VectorXd unit_ball(int dim);

  // Fisher-Yates shuffle.
  void shuffle(std::vector<std::size_t>& values);

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace pillar

#endif  // PILLAR_RNG_HPP_
