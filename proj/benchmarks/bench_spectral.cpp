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

#include <benchmark/benchmark.h>

#include "pillar/spectral.hpp"
#include "pillar/synthdata.hpp"

namespace {

using namespace pillar;

void BM_EmpiricalCovariance(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GmmSpec spec = GmmSpec::axis_aligned(d, 0.2, 0.05);
  Rng rng(1);
  const ShiftedSample sample = sample_shifted_unlabeled(spec, 0.0, 4096, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_covariance(sample.data, false));
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_EmpiricalCovariance)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_TopKEigenbasis(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GmmSpec spec = GmmSpec::axis_aligned(d, 0.2, 0.05);
  const Eigen::MatrixXd cov = gmm_population_covariance(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(top_k_eigenbasis(cov, 2));
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_TopKEigenbasis)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_Project(benchmark::State& state) {
  const int d = 256;
  const GmmSpec spec = GmmSpec::axis_aligned(d, 0.2, 0.05);
  Rng rng(2);
  const ShiftedSample sample = sample_shifted_unlabeled(spec, 0.0, 8192, rng);
  // Empirical covariance has a full (non-degenerate) spectrum.
  const Eigen::MatrixXd cov = empirical_covariance(sample.data, false);
  const ProjectionBasis basis =
      top_k_eigenbasis(cov, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(basis, sample.data));
  }
}
BENCHMARK(BM_Project)->Arg(2)->Arg(16)->Arg(128);

}  // namespace
