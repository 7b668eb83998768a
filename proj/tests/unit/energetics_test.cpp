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
#include <vector>

#include <gtest/gtest.h>

#include "hallqet/energetics.hpp"
#include "hallqet/errors.hpp"

namespace hallqet {
namespace {

ExperimentParams with_L(double L_over_l) {
  ExperimentParams p = default_params();
  p.L = L_over_l * p.l;
  return p;
}

TEST(Energetics, FrozenEBValues) {
  EBOptions o;
  o.regulator_check = false;
  EBResult r2 = compute_EB_detailed(validate(with_L(2)), o);
  EBResult r4 = compute_EB_detailed(validate(with_L(4)), o);
  EXPECT_TRUE(r2.converged);
  EXPECT_NEAR(r2.value / units::ueV, 41.6899, 41.6899 * 1e-5);
  EXPECT_NEAR(r4.value / units::ueV, 8.38155, 8.38155 * 1e-5);
  EXPECT_LE(r2.error_estimate, 1e-6 * std::abs(r2.value) * 10);
}

TEST(Energetics, EBChangesSignForWideWindows) {
  EBOptions o;
  o.regulator_check = false;
  EXPECT_LT(compute_EB_detailed(validate(with_L(5)), o).value, 0);
}

TEST(Energetics, EBLinearInLambda) {
  EBOptions o;
  o.regulator_check = false;
  ExperimentParams p = with_L(2);
  double a = compute_EB_detailed(validate(p), o).value;
  p.lambda_amp *= 3;
  double b = compute_EB_detailed(validate(p), o).value;
  EXPECT_NEAR(b / a, 3.0, 1e-12);
  p.lambda_amp = 0;
  EXPECT_EQ(compute_EB_detailed(validate(p), o).value, 0.0);
}

TEST(Energetics, ShortSeparationRejected) {
  EXPECT_THROW(compute_EB(validate(with_L(1.5))), ValidationError);
  ExperimentParams p = with_L(1.5);
  p.allow_short_L = true;
  EBOptions o;
  o.regulator_check = false;
  EXPECT_NO_THROW(compute_EB_detailed(validate(p), o));
}

TEST(Energetics, RegulatorSensitivityReported) {
  EBResult r = compute_EB_detailed(validate(with_L(2)));
  EXPECT_GT(r.value_double_regulator, 0);
  EXPECT_NEAR(r.regulator_sensitivity,
              std::abs(r.value - r.value_double_regulator) / std::abs(r.value), 1e-15);
  EXPECT_EQ(r.singularity_warning, r.regulator_sensitivity > 0.05);
}

TEST(Energetics, OrderEstimateAtDefaults) {
  double e = eb_order_estimate(validate(default_params()));
  EXPECT_GT(e / units::ueV, 10);
  EXPECT_LT(e / units::ueV, 1000);
}

TEST(Energetics, LogLogFitRecoversPowerLaw) {
  std::vector<double> x{2, 3, 4, 5, 6}, y;
  for (double v : x) y.push_back(7.5 * std::pow(v, -5.0));
  ScalingFit f = fit_log_log(x, y);
  ASSERT_TRUE(f.computable);
  EXPECT_NEAR(f.slope, -5.0, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 7.5, 1e-10);
  EXPECT_LT(f.slope_stderr, 1e-10);
  EXPECT_EQ(f.points, 5u);
}

TEST(Energetics, LogLogFitRejectsNonPositive) {
  std::vector<double> x{2, 3, 4, 5}, y{1, 0.5, -0.1, 0.05};
  ScalingFit f = fit_log_log(x, y);
  EXPECT_FALSE(f.computable);
  EXPECT_FALSE(f.reason.empty());
}

TEST(Energetics, ScalingNeedsFourValidSeparations) {
  ValidatedParams p = validate(default_params());
  double l = p->l;
  std::vector<double> three{2 * l, 3 * l, 4 * l};
  EXPECT_THROW(fit_scaling_exponent(p, three), ValidationError);
  std::vector<double> short_one{1 * l, 3 * l, 4 * l, 5 * l};
  EXPECT_THROW(fit_scaling_exponent(p, short_one), ValidationError);
}

TEST(Energetics, CurrentConversion) {
  ExperimentParams p = default_params();
  double e = current_to_energy_density(1e-8, p);
  double ref = kPi * PhysicalConstants::hbar * 1e-16 /
               (p.nu_U * PhysicalConstants::e_charge * PhysicalConstants::e_charge * p.v_g);
  EXPECT_NEAR(e / ref, 1.0, 1e-14);
  EXPECT_NEAR(e, 2.15107e-19, 1e-24);
  EXPECT_NEAR(energy_density_to_current(e, p), 1e-8, 1e-22);
  EXPECT_EQ(current_to_energy_density(0, p), 0);
}

TEST(Energetics, NarrowWindowsReachFarRegime) {
  // For sigma << L the kernel no longer averages over its sign change and the
  // magnitude falls close to L^-5.
  ExperimentParams p = default_params();
  p.sigma_A = p.sigma_B = p.l / 8;
  p.eps_uv = p.l / 800;
  EBOptions o;
  o.regulator_check = false;
  std::vector<double> Ls, Es;
  for (double f : {4.0, 6.0, 8.0, 10.0}) {
    p.L = f * p.l;
    Ls.push_back(p.L);
    Es.push_back(std::abs(compute_EB_detailed(validate(p), o).value));
  }
  ScalingFit fit = fit_log_log(Ls, Es);
  ASSERT_TRUE(fit.computable);
  EXPECT_NEAR(fit.slope, -5.0, 0.4);
}

TEST(Energetics, BudgetConsistent) {
  EBOptions o;
  o.regulator_check = false;
  ValidatedParams p = validate(default_params());
  EnergyBudget b = energy_budget(p, o);
  EXPECT_EQ(b.E_A, compute_EA(p));
  EXPECT_EQ(b.E_1, compute_E1(p));
  EXPECT_NEAR(b.E_A / units::meV, 0.86716, 1e-4);
  EXPECT_NEAR(b.E_1 / units::meV, 30.63, 0.01);
  EXPECT_NEAR(b.thermal, thermal_energy(p->temperature), 0);
  EXPECT_GT(b.E_1, b.E_A);
  EXPECT_NEAR(b.detect_current,
              energy_density_to_current(std::max(b.E_B.value, 0.0) / p->b, p.get()), 1e-30);
}

}  // namespace
}  // namespace hallqet
