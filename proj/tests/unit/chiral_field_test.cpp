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

#include <gtest/gtest.h>

#include "hallqet/chiral_field.hpp"
#include "hallqet/mode_grid.hpp"
#include "hallqet/quadrature.hpp"

namespace hallqet {
namespace {

TEST(Window, DerivativesMatchFiniteDifferences) {
  WindowProfile w{0.3, 0.7, 2.5};
  const double h = 1e-4;
  for (int m = 0; m < 8; ++m) {
    for (double x : {-1.1, 0.0, 0.3, 0.9, 2.0}) {
      double fd = (w.derivative(x + h, m) - w.derivative(x - h, m)) / (2 * h);
      double scale = std::abs(w.derivative(x, m + 1)) + std::pow(w.sigma, -m - 1);
      EXPECT_NEAR(w.derivative(x + 0, m + 1), fd, 1e-6 * scale) << m << " " << x;
    }
  }
}

TEST(Window, FourierMatchesQuadrature) {
  WindowProfile w{0.4, 0.5, 1.5};
  for (double k : {0.0, 0.7, 3.0}) {
    IntegrationSpec s;
    s.bounds = {{w.center - 12 * w.sigma, w.center + 12 * w.sigma}};
    s.rel_tol = 1e-13;
    double re = integrate_1d([&](double x) { return w(x) * std::cos(k * x); }, s).value;
    double im = integrate_1d([&](double x) { return w(x) * std::sin(k * x); }, s).value;
    EXPECT_NEAR(w.fourier(k).real(), re, 1e-12);
    EXPECT_NEAR(w.fourier(k).imag(), im, 1e-12);
  }
}

TEST(Window, DerivativeNormMatchesQuadrature) {
  WindowProfile w{0.0, 1.3, 0.8};
  for (int m = 0; m <= 4; ++m) {
    IntegrationSpec s;
    s.bounds = {{-20.0, 20.0}};
    s.rel_tol = 1e-13;
    double q = integrate_1d([&](double x) { return std::pow(w.derivative(x, m), 2); }, s).value;
    EXPECT_NEAR(window_derivative_l2(w, m) / q, 1.0, 1e-11) << m;
  }
}

TEST(Window, ProtocolWindows) {
  ExperimentParams p = default_params();
  WindowProfile a = window_A(p), b = window_B(p);
  EXPECT_EQ(a.center, 0);
  EXPECT_EQ(a.amplitude, 1);
  EXPECT_DOUBLE_EQ(b.center, p.b / 2 - p.L);
  EXPECT_EQ(b.amplitude, p.lambda_amp);
}

TEST(Correlator, MatchesRegularizedForm) {
  CorrelatorKernel k{3.0, 0.01};
  for (double x : {-1.0, 0.0, 0.02, 0.5}) {
    std::complex<double> ref = 3.0 / (4 * kPi * kPi) / std::pow(std::complex<double>(0.01, x), 2);
    EXPECT_NEAR(std::abs(correlator(k, x) - ref), 0.0, 1e-12 * std::abs(ref));
  }
}

// The vacuum variance of a smeared density is, on a ring, a sum over modes
// of nu k |g~(k)|^2 / (2 pi Lambda); for a large ring this is a Riemann sum
// of the spectral integral.
TEST(Correlator, QuadFormMatchesRingModeSum) {
  ExperimentParams p = default_params();
  const double nu = 3, eps = p.l / 100;
  for (int order : {0, 1, 2}) {
    WindowDerivative g{window_A(p), order, 1.7};
    double spectral = quad_form_vacuum({nu, eps}, g);
    const double ring = 400 * p.l;
    double sum = 0;
    for (int n = 0; n < 20000; ++n) {
      double k = 2 * kPi * (n + 1) / ring;
      std::complex<double> gk = g.scale * std::pow(std::complex<double>(0, -k), order) *
                                g.window.fourier(k);
      sum += nu * k * std::norm(gk) * std::exp(-k * eps) / (2 * kPi * ring);
    }
    EXPECT_NEAR(sum / spectral, 1.0, order == 0 ? 1e-4 : 1e-8) << order;
  }
}

TEST(Correlator, PositionSpaceDoubleIntegral) {
  // Wide window and large eps: the position-space form is smooth enough for
  // direct cubature.
  WindowDerivative g{{0.0, 1.0, 1.0}, 1, 1.0};
  CorrelatorKernel k{2.0, 0.5};
  IntegrationSpec s;
  s.bounds = {{-9.0, 9.0}, {-9.0, 9.0}};
  s.rel_tol = 1e-8;
  auto f = [&](std::span<const double> x) { return g(x[0]) * g(x[1]) * correlator(k, x[0] - x[1]).real(); };
  double direct = integrate_nd(f, s).value;
  EXPECT_NEAR(quad_form_vacuum(k, g) / direct, 1.0, 1e-6);
}

TEST(ModeGrid, DensityRowsAndSmearingAgree) {
  ExperimentParams p = default_params();
  ModeGrid g = ModeGrid::for_params(p, 64);
  EXPECT_DOUBLE_EQ(g.ring_length, 8 * (p.L + 4 * p.l));
  WindowProfile w{0.2 * p.l, p.l, 1.0};
  // integral rho(x) w(x) dx on the ring by the trapezoid rule (exact for
  // trigonometric polynomials) versus the analytic smearing coefficients.
  const int npts = 4096;
  std::vector<double> xs(npts);
  for (int i = 0; i < npts; ++i) xs[i] = -0.5 * g.ring_length + g.ring_length * i / npts;
  for (Channel c : {Channel::kS, Channel::kU}) {
    Eigen::MatrixXd rows = density_rows(g, c, 3.0, xs);
    Eigen::VectorXd wv(npts);
    for (int i = 0; i < npts; ++i) wv(i) = w(xs[i]) * g.ring_length / npts;
    Eigen::VectorXd num = rows.transpose() * wv;
    Eigen::VectorXd ana = smeared_density(g, c, 3.0, w, 0);
    EXPECT_LT((num - ana).norm(), 1e-10 * ana.norm());
  }
}

}  // namespace
}  // namespace hallqet
