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

#include <random>

#include "hallqet/chiral_field.hpp"
#include "hallqet/params.hpp"

namespace hallqet {

struct RCDetector {
  double R = 0;
  double C = 0;
  double omega_c = 0;
};

RCDetector rc_detector(const ExperimentParams& p);

// sqrt( hbar / (2 pi R C^2) * ln(1 + (omega_c R C)^2) )
double delta_v(const RCDetector& det);

// e v_g R / (2 delta_v)
double measurement_coupling(const ExperimentParams& p);

// RMS of R dQ_S/dt(0) = -e v_g R integral rho_S dw_A/dx in the vacuum.
double signal_rms(const ExperimentParams& p, const WindowProfile& w_A);

struct GaussianLaw {
  double mean = 0;
  double variance = 0;

  double pdf(double x) const;
  double cdf(double x) const;
  double sample(std::mt19937_64& rng) const;
};

struct MeasurementModel {
  double delta_v = 0;
  WindowProfile w_A;
  double coupling = 0;  // e v_g R / (2 delta_v)
  double e_vg_R = 0;

  // Voltage per unit density contributed at x: -e v_g R dw_A/dx.
  double signal_kernel(double x) const { return -e_vg_R * w_A.derivative(x, 1); }
};

MeasurementModel measurement_model(const ExperimentParams& p);

// p(v) = <0|Pi_v|0>: zero mean, variance delta_v^2 + signal_rms^2.
GaussianLaw outcome_distribution(const MeasurementModel& model, const CorrelatorKernel& kernel);

}  // namespace hallqet
