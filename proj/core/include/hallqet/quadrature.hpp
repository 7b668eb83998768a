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

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hallqet {

struct Interval {
  double lo = 0;
  double hi = 0;
};

struct IntegrationSpec {
  std::vector<Interval> bounds;  // one per axis, 1..4 axes
  double rel_tol = 1e-10;
  double abs_tol = 0;
  std::size_t max_subdivisions = 100000;
  std::size_t max_evaluations = 0;  // 0: unlimited
  // Interior points used to seed the initial partition (1-D only).
  std::vector<double> breakpoints;
  bool throw_on_failure = true;

  std::size_t dimension() const { return bounds.size(); }
};

struct QuadResult {
  double value = 0;
  double error_estimate = 0;
  std::size_t subdivisions_used = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  // Some pieces sit at the floating-point cancellation floor and were not
  // bisected further.
  bool roundoff_limited = false;
};

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(std::span<const double>)>;

// Globally adaptive 21-point Gauss-Kronrod with embedded 10-point Gauss.
// Throws ConvergenceFailure when the tolerance is not met within the limits
// (unless spec.throw_on_failure is false).
QuadResult integrate_1d(const Integrand1D& f, const IntegrationSpec& spec);

// Globally adaptive cubature: Genz-Malik degree 7/5 for 2..4 axes, bisecting
// the worst region along its roughest axis. One-axis specs go to
// integrate_1d. Region sums are accumulated in creation order, so the result
// does not depend on heap tie-breaking.
QuadResult integrate_nd(const IntegrandND& f, const IntegrationSpec& spec);

// Integral over [lo, inf) via x = lo + t / (1 - t).
QuadResult integrate_to_infinity(const Integrand1D& f, double lo, double rel_tol,
                                 double abs_tol = 0, std::size_t max_subdivisions = 100000);

// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Re[(u + i eps)^-n]. Finite for every u when eps > 0.
double regularized_power_kernel(double u, int n, double eps);

}  // namespace hallqet
