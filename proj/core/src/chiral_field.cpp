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

#include "hallqet/chiral_field.hpp"

#include <cmath>
#include <stdexcept>

#include "hallqet/quadrature.hpp"

namespace hallqet {

namespace {

// He_n(t), probabilists' Hermite.
double hermite_he(int n, double t) {
  double h0 = 1, h1 = t;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    double h2 = t * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace

double WindowProfile::derivative(double x, int order) const {
  if (order < 0 || order > 8) throw std::invalid_argument("window derivative order must be 0..8");
  double t = (x - center) / sigma;
  double g = amplitude * std::exp(-0.5 * t * t);
  double sign = (order % 2) ? -1.0 : 1.0;
  return sign * hermite_he(order, t) * g / std::pow(sigma, order);
}

std::complex<double> WindowProfile::fourier(double k) const {
  double mag = amplitude * std::sqrt(2 * kPi) * sigma * std::exp(-0.5 * k * k * sigma * sigma);
  return std::polar(mag, k * center);
}

WindowProfile window_A(const ExperimentParams& p) { return {0.0, p.sigma_A, 1.0}; }

WindowProfile window_B(const ExperimentParams& p) {
  return {0.5 * p.b - p.L, p.sigma_B, p.lambda_amp};
}

std::complex<double> correlator(const CorrelatorKernel& kernel, double x) {
  std::complex<double> z(kernel.eps_uv, x);
  return kernel.nu / (4 * kPi * kPi) / (z * z);
}

double quad_form_vacuum(const CorrelatorKernel& kernel, const WindowDerivative& g,
                        double rel_tol) {
  if (g.scale == 0 || g.window.amplitude == 0) return 0.0;
  const int m = g.order;
  const double s = g.window.sigma;
  // |g~(k)|^2 = scale^2 k^(2m) 2 pi A^2 s^2 exp(-s^2 k^2), independent of the centre.
  const double c = g.scale * g.scale * 2 * kPi * g.window.amplitude * g.window.amplitude * s * s;
  auto integrand = [&](double k) {
    return k * c * std::pow(k, 2 * m) * std::exp(-s * s * k * k - k * kernel.eps_uv);
  };
  // Past k_max the Gaussian factor is below e^-90 of the peak.
  double k_max = (std::sqrt(2.0 * m + 1) + 13.5) / s;
  IntegrationSpec spec;
  spec.bounds = {{0.0, k_max}};
  spec.breakpoints = {std::sqrt(m + 0.5) / s, 3.0 / s, 6.0 / s};
  spec.rel_tol = rel_tol;
  auto r = integrate_1d(integrand, spec);
  return kernel.nu / (4 * kPi * kPi) * r.value;
}

double window_derivative_l2(const WindowProfile& w, int order) {
  if (order < 0 || order > 8) throw std::invalid_argument("window derivative order must be 0..8");
  // integral (d^m G)^2 = A^2 Gamma(m + 1/2) sigma^(1 - 2m).
  return w.amplitude * w.amplitude * std::tgamma(order + 0.5) * std::pow(w.sigma, 1 - 2 * order);
}

}  // namespace hallqet
