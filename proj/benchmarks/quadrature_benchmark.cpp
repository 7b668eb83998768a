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

#include <cmath>
#include <span>

#include <benchmark/benchmark.h>

#include "hallqet/chiral_field.hpp"
#include "hallqet/quadrature.hpp"

namespace hallqet {
namespace {

void BM_Integrate1dRegulatedPole(benchmark::State& state) {
  const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
  IntegrationSpec spec;
  spec.bounds = {{-8.0, 8.0}};
  spec.breakpoints = {0.0};
  spec.rel_tol = 1e-8;
  for (auto _ : state) {
    QuadResult r = integrate_1d(
        [&](double u) { return std::exp(-u * u / 2) * regularized_power_kernel(u - 0.3, 2, eps); },
        spec);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_Integrate1dRegulatedPole)->DenseRange(1, 3);

void BM_CubatureGaussian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  IntegrationSpec spec;
  for (int i = 0; i < dim; ++i) spec.bounds.push_back({-1.0, 2.0});
  spec.rel_tol = 1e-6;
  for (auto _ : state) {
    QuadResult r = integrate_nd(
        [](std::span<const double> x) {
          double q = 0;
          for (double v : x) q += v * v;
          return std::exp(-q);
        },
        spec);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_CubatureGaussian)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_QuadFormVacuum(benchmark::State& state) {
  CorrelatorKernel k{3.0, 0.01};
  WindowDerivative g{{0.0, 1.0, 1.0}, 1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(quad_form_vacuum(k, g));
}
BENCHMARK(BM_QuadFormVacuum);

}  // namespace
}  // namespace hallqet

BENCHMARK_MAIN();
