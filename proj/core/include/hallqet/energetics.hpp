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
#include <span>
#include <string>
#include <vector>

#include "hallqet/params.hpp"

namespace hallqet {

struct EBOptions {
  double rel_tol = 1e-6;
  std::size_t max_evaluations = 1000000;  // outer cubature points
  double window_cut = 8;                  // sigmas kept on each Gaussian
  bool regulator_check = true;            // also evaluate with 2 eps_uv
  int inner_breakpoint_levels = 12;
  bool throw_on_failure = true;
};

struct EBResult {
  double value = 0;  // J
  double error_estimate = 0;
  double value_double_regulator = 0;  // same integral at 2 eps_uv
  double regulator_sensitivity = 0;   // |value - value_double| / |value|
  bool singularity_warning = false;   // sensitivity above 5 %
  std::size_t outer_evaluations = 0;
  std::size_t inner_evaluations = 0;
  std::size_t subdivisions = 0;
  std::size_t inner_failures = 0;          // inner integrals that hit the subdivision cap
  std::size_t inner_roundoff_limited = 0;  // inner integrals stopped at the cancellation floor
  bool converged = false;
};

double compute_EA(const ValidatedParams& p);

// <G_S^2> with G_S = -(e v_g R / 2 dV) integral rho_S dw_A/dx.
double vacuum_G2(const ValidatedParams& p);

double compute_E1(const ValidatedParams& p);

// First-order energy gain of U at B. Throws ValidationError when L < 2l
// without allow_short_L, ConvergenceFailure when the cubature misses its
// tolerance.
EBResult compute_EB_detailed(const ValidatedParams& p, const EBOptions& opts = {});
double compute_EB(const ValidatedParams& p);

// Prefactor of the four-fold integral, 3 e^3 v_g R nu_S / (4 pi^3 eps dV), J m^4.
double eb_prefactor(const ExperimentParams& p);

// (e^2 lambda / 4 pi eps l) (e v_g R / l dV) (l/L)^5
double eb_order_estimate(const ValidatedParams& p);

struct ScalingFit {
  bool computable = false;
  std::string reason;  // set when not computable
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  std::size_t points = 0;
};

// Least-squares line through (log x, log y).
ScalingFit fit_log_log(std::span<const double> x, std::span<const double> y);

struct ScalingRun {
  std::vector<double> L_values;
  std::vector<EBResult> eb;
  ScalingFit fit;
};

// Needs at least 4 distinct L values, all >= 2l.
ScalingRun fit_scaling_exponent(const ValidatedParams& p, std::span<const double> L_values,
                                const EBOptions& opts = {});

// epsilon = pi hbar j^2 / (nu_U e^2 v_g), and its inverse (j >= 0).
double current_to_energy_density(double current, const ExperimentParams& p);
double energy_density_to_current(double energy_density, const ExperimentParams& p);

struct EnergyBudget {
  double delta_v = 0;       // V
  double signal_rms = 0;    // V
  double E_A = 0;           // J
  double E_1 = 0;           // J
  double G2 = 0;            // <G_S^2>
  EBResult E_B;             // J
  double E_B_order_estimate = 0;  // J
  double thermal = 0;             // J
  double detect_current = 0;      // A, for an energy density E_B / b
  double eps_uv = 0;
  double omega_c = 0;
  double eb_rel_tol = 0;
};

EnergyBudget energy_budget(const ValidatedParams& p, const EBOptions& opts = {});

}  // namespace hallqet
