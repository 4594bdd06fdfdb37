// Copyright 2026 The ROAR Authors.
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

// Serial reference vs OpenMP kernel for the hot loops. Results are identical
// by construction; only wall time differs. Set ROAR_JOBS or OMP_NUM_THREADS
// to control the worker count.

#include <benchmark/benchmark.h>

#include "roar/harness.hpp"
#include "roar/random.hpp"
#include "roar/recourse.hpp"
#include "roar/theory.hpp"

namespace {

using namespace roar;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void BM_MonteCarloInvalidation(benchmark::State& state) {
  const GaussianTheoryInput in(Eigen::Vector3d(1, -0.5, 0.2), Eigen::Vector3d(-1.2, 0.3, 0),
                               Eigen::Vector3d(0.4, 0.1, -0.3), Eigen::Matrix3d::Identity());
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_invalidation(in, 1000000, 7, mode(state)).hits);
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_MonteCarloInvalidation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ShiftExperiment(benchmark::State& state) {
  const nlohmann::json j = {{"data", {{"synthetic", {{"n", 500}}}}},
                            {"training", {{"learning_rate", 0.1}, {"epochs", 100}}},
                            {"methods", {"cfe", "roar", "ar"}},
                            {"lambda", 0.1},
                            {"folds", 5},
                            {"seeds", {0, 1}},
                            {"max_instances", 40}};
  const ExperimentSpec spec = ExperimentSpec::from_json(j);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_shift_experiment(spec, mode(state)).methods.size());
  }
}
BENCHMARK(BM_ShiftExperiment)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
