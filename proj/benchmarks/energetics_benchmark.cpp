// Copyright 2026 The hallqet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "hallqet/energetics.hpp"

namespace hallqet {
namespace {

void BM_ComputeEB(benchmark::State& state) {
  ExperimentParams p = default_params();
  p.L = static_cast<double>(state.range(0)) * p.l;
  ValidatedParams v = validate(p);
  EBOptions o;
  o.rel_tol = 1e-5;
  o.regulator_check = false;
  for (auto _ : state) benchmark::DoNotOptimize(compute_EB_detailed(v, o).value);
}
BENCHMARK(BM_ComputeEB)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ComputeEAandE1(benchmark::State& state) {
  ValidatedParams v = validate(default_params());
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_EA(v));
    benchmark::DoNotOptimize(compute_E1(v));
  }
}
BENCHMARK(BM_ComputeEAandE1);

}  // namespace
}  // namespace hallqet

BENCHMARK_MAIN();
