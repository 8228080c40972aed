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

#include "pillar/optim.hpp"
#include "pillar/synthdata.hpp"

namespace {

using namespace pillar;

LabeledDataset bench_data(int n, int d) {
  const GmmSpec spec = GmmSpec::axis_aligned(d, 0.2, 0.1);
  Rng rng(3);
  return sample_gmm(spec, n, rng).data;
}

void BM_DpSgdStep(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const LabeledDataset data = bench_data(2000, k);
  const SgdSchedule schedule = SgdSchedule::constant(1, 0.1, 256, 1.0);
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dp_sgd(data, LossKind::kScaledHinge, 0.3, schedule, 1.0, rng));
  }
}
BENCHMARK(BM_DpSgdStep)->Arg(2)->Arg(16)->Arg(64);

void BM_GdBaselineStep(benchmark::State& state) {
  const LabeledDataset data = bench_data(2000, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gd_baseline(data, 0.3, 1, 0.1));
  }
}
BENCHMARK(BM_GdBaselineStep)->Arg(2)->Arg(64);

void BM_ABaseNoiseStep(benchmark::State& state) {
  const LabeledDataset data = bench_data(32, 8);
  Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a_base(data, 0.3, 1.0, 1e-5, rng));
  }
}
BENCHMARK(BM_ABaseNoiseStep);

}  // namespace
