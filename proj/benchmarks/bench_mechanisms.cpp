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

#include "pillar/mechanisms.hpp"

namespace {

using namespace pillar;

void BM_ExponentialSelect(benchmark::State& state) {
  Rng rng(6);
  std::vector<double> utilities(state.range(0));
  for (double& u : utilities) u = rng.uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exponential_select(utilities, 1.0, 0.1, rng));
  }
}
BENCHMARK(BM_ExponentialSelect)->Arg(4)->Arg(64)->Arg(1024);

void BM_RdpEpsilonFullBatch(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(rdp_epsilon(2.0, 1000, 1.0, 1e-5));
  }
}
BENCHMARK(BM_RdpEpsilonFullBatch);

void BM_RdpEpsilonSubsampled(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(rdp_epsilon(2.0, 1000, 0.05, 1e-5));
  }
}
BENCHMARK(BM_RdpEpsilonSubsampled);

void BM_CalibrateSigma(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_dpsgd_sigma(0.7, 1e-5, 1000, 0.25));
  }
}
BENCHMARK(BM_CalibrateSigma);

}  // namespace
