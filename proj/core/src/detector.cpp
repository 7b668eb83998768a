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

#include "hallqet/detector.hpp"

#include <cmath>

namespace hallqet {

RCDetector rc_detector(const ExperimentParams& p) { return {p.R, p.C, p.omega_c}; }

double delta_v(const RCDetector& det) {
  double rc = det.R * det.C;
  double band = std::log1p((det.omega_c * rc) * (det.omega_c * rc));
  return std::sqrt(PhysicalConstants::hbar / (2 * kPi * det.R * det.C * det.C) * band);
}

double measurement_coupling(const ExperimentParams& p) {
  return PhysicalConstants::e_charge * p.v_g * p.R / (2 * delta_v(rc_detector(p)));
}

double signal_rms(const ExperimentParams& p, const WindowProfile& w_A) {
  CorrelatorKernel kernel{p.nu_S, p.eps_uv};
  WindowDerivative g{w_A, 1, 1.0};
  return PhysicalConstants::e_charge * p.v_g * p.R * std::sqrt(quad_form_vacuum(kernel, g));
}

double GaussianLaw::pdf(double x) const {
  double z = x - mean;
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2 * kPi * variance);
}

double GaussianLaw::cdf(double x) const {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2 * variance));
}

double GaussianLaw::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  return dist(rng);
}

MeasurementModel measurement_model(const ExperimentParams& p) {
  MeasurementModel m;
  m.delta_v = delta_v(rc_detector(p));
  m.w_A = window_A(p);
  m.e_vg_R = PhysicalConstants::e_charge * p.v_g * p.R;
  m.coupling = m.e_vg_R / (2 * m.delta_v);
  return m;
}

GaussianLaw outcome_distribution(const MeasurementModel& model, const CorrelatorKernel& kernel) {
  double q = quad_form_vacuum(kernel, WindowDerivative{model.w_A, 1, model.e_vg_R});
  return {0.0, model.delta_v * model.delta_v + q};
}

}  // namespace hallqet
