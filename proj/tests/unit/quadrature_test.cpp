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
#include <complex>

#include <gtest/gtest.h>

#include "hallqet/errors.hpp"
#include "hallqet/quadrature.hpp"
#include "hallqet/units.hpp"

namespace hallqet {
namespace {

IntegrationSpec spec_1d(double lo, double hi, double rel = 1e-12) {
  IntegrationSpec s;
  s.bounds = {{lo, hi}};
  s.rel_tol = rel;
  return s;
}

TEST(Quadrature, SmoothIntegrals) {
  auto r = integrate_1d([](double x) { return std::sin(x); }, spec_1d(0, kPi));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  r = integrate_1d([](double x) { return std::exp(-x * x); }, spec_1d(-10, 10));
  EXPECT_NEAR(r.value, std::sqrt(kPi), 1e-13);
}

TEST(Quadrature, EndpointSingularity) {
  auto r = integrate_1d([](double x) { return 1 / std::sqrt(x); }, spec_1d(0, 1, 1e-10));
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, BreakpointsHelpAKink) {
  IntegrationSpec s = spec_1d(-1, 2, 1e-12);
  s.breakpoints = {0.0};
  auto r = integrate_1d([](double x) { return std::abs(x); }, s);
  EXPECT_NEAR(r.value, 2.5, 1e-13);
  EXPECT_LE(r.evaluations, 2u * 21u);
}

TEST(Quadrature, ErrorEstimateBoundsTrueError) {
  auto f = [](double x) { return std::cos(30 * x) * std::exp(x); };
  double exact = (std::exp(1.0) * (std::cos(30.0) + 30 * std::sin(30.0)) - 1) / 901;
  auto r = integrate_1d(f, spec_1d(0, 1, 1e-8));
  EXPECT_LE(std::abs(r.value - exact), std::max(r.error_estimate, 1e-15));
}

TEST(Quadrature, FailureIsReportedOrThrown) {
  IntegrationSpec s = spec_1d(0, 1, 1e-14);
  s.max_subdivisions = 3;
  auto f = [](double x) { return std::sin(1 / (x + 1e-3)); };
  EXPECT_THROW(integrate_1d(f, s), ConvergenceFailure);
  s.throw_on_failure = false;
  auto r = integrate_1d(f, s);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.error_estimate, 0);
}

TEST(Quadrature, GaussianProductsInTwoToFourDimensions) {
  for (int dim = 2; dim <= 4; ++dim) {
    IntegrationSpec s;
    for (int i = 0; i < dim; ++i) s.bounds.push_back({-1.0, 2.0});
    // The Genz-Malik error estimate is conservative; 4D stays within the cap at 1e-7.
    s.rel_tol = dim == 4 ? 1e-7 : 1e-9;
    auto f = [](std::span<const double> x) {
      double q = 0;
      for (double v : x) q += v * v;
      return std::exp(-q);
    };
    double one = 0.5 * std::sqrt(kPi) * (std::erf(2.0) + std::erf(1.0));
    auto r = integrate_nd(f, s);
    EXPECT_TRUE(r.converged) << dim;
    EXPECT_NEAR(r.value / std::pow(one, dim), 1.0, 1e-8) << dim;
  }
}

TEST(Quadrature, CubatureIsExactForLowDegreePolynomials) {
  IntegrationSpec s;
  s.bounds = {{0.0, 1.0}, {0.0, 2.0}, {-1.0, 1.0}};
  s.rel_tol = 1e-13;
  auto f = [](std::span<const double> x) {
    return x[0] * x[0] * x[0] * x[1] * x[1] + x[2] * x[2] * x[2] * x[2];
  };
  // (1/4)(8/3)(2) + (1)(2)(2/5)
  auto r = integrate_nd(f, s);
  EXPECT_NEAR(r.value, 4.0 / 3.0 + 0.8, 1e-13);
  EXPECT_EQ(r.subdivisions_used, 0u);
}

TEST(Quadrature, SemiInfinite) {
  auto r = integrate_to_infinity([](double x) { return std::exp(-x); }, 1.0, 1e-12);
  EXPECT_NEAR(r.value, std::exp(-1.0), 1e-13);
  r = integrate_to_infinity([](double x) { return 1 / (1 + x * x); }, 0.0, 1e-11);
  EXPECT_NEAR(r.value, kPi / 2, 1e-10);
}

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {1, 2, 5, 16, 64}) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    ASSERT_EQ(static_cast<int>(x.size()), n);
    for (int deg = 0; deg <= 2 * n - 1; deg += (n > 5 ? 7 : 1)) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], deg);
      double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-13) << n << " " << deg;
    }
  }
}

TEST(Quadrature, RegularizedPowerKernel) {
  for (int n : {1, 2, 5}) {
    for (double u : {-3.0, -0.01, 0.0, 1e-4, 0.5, 40.0}) {
      double eps = 0.01;
      std::complex<double> z(u, eps);
      double ref = std::real(std::pow(z, -n));
      EXPECT_NEAR(regularized_power_kernel(u, n, eps), ref, 1e-12 * std::pow(std::abs(z), -n))
          << n << " " << u;
    }
  }
}

}  // namespace
}  // namespace hallqet
