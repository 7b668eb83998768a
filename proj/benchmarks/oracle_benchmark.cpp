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

#include "hallqet/oracle.hpp"

namespace hallqet {
namespace {

void BM_BuildHamiltonians(benchmark::State& state) {
  ExperimentParams p = default_params();
  ModeGrid g = ModeGrid::for_params(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonians(p, g).coupling.data());
}
BENCHMARK(BM_BuildHamiltonians)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_WindowPropagator(benchmark::State& state) {
  ExperimentParams p = default_params();
  ModeGrid g = ModeGrid::for_params(p, static_cast<int>(state.range(0)));
  QuadraticHamiltonians h = build_hamiltonians(p, g);
  ProtocolTimes t = protocol_times(p);
  for (auto _ : state) {
    Propagator w = window_propagator(h, {t.t_i, t.t_f}, 1.0);
    benchmark::DoNotOptimize(w.S.data());
  }
}
BENCHMARK(BM_WindowPropagator)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

void BM_ProtocolShots(benchmark::State& state) {
  ValidatedParams v = validate(default_params());
  ProtocolOptions o;
  o.coupling_scale = 0.01;
  ProtocolSimulator sim(v, ModeGrid::for_params(v.get(), 64), o);
  const auto shots = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.run(FeedbackMode::kCorrelated, shots, 1).E_B_oracle);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProtocolShots)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hallqet

BENCHMARK_MAIN();
