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

#include <complex>

#include "hallqet/params.hpp"

namespace hallqet {

// amplitude * exp(-(x - center)^2 / (2 sigma^2))
struct WindowProfile {
  double center = 0;
  double sigma = 1;
  double amplitude = 1;

  double operator()(double x) const { return derivative(x, 0); }
  // d^order/dx^order via probabilists' Hermite polynomials, order 0..8.
  double derivative(double x, int order) const;
  // W(k) = integral of w(x) exp(+i k x) dx.
  std::complex<double> fourier(double k) const;
};

WindowProfile window_A(const ExperimentParams& p);
WindowProfile window_B(const ExperimentParams& p);

// Delta(x) = nu / (4 pi^2) integral_0^inf k exp(-k eps_uv) exp(-i k x) dk.
struct CorrelatorKernel {
  double nu = 1;
  double eps_uv = 1;
};

std::complex<double> correlator(const CorrelatorKernel& kernel, double x);

// g(x) = scale * d^order w / dx^order.
struct WindowDerivative {
  WindowProfile window;
  int order = 1;
  double scale = 1;

  double operator()(double x) const { return scale * window.derivative(x, order); }
};

// <0| (integral rho g)^2 |0> = (nu / 4 pi^2) integral_0^inf k |g~(k)|^2 e^{-k eps} dk.
// Throws ConvergenceFailure if the spectral integral misses rel_tol.
double quad_form_vacuum(const CorrelatorKernel& kernel, const WindowDerivative& g,
                        double rel_tol = 1e-11);

// integral (d^order w / dx^order)^2 dx for order 0..8, closed form.
double window_derivative_l2(const WindowProfile& w, int order);

}  // namespace hallqet
