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

#include "hallqet/gaussian_state.hpp"

namespace hallqet {
namespace {

Eigen::MatrixXd squeezer(double r) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 0) = std::exp(-r);
  s(1, 1) = std::exp(r);
  return s;
}

TEST(GaussianState, VacuumIsMinimumUncertainty) {
  GaussianState v = GaussianState::vacuum(6);
  EXPECT_TRUE(satisfies_uncertainty(v));
  EXPECT_NEAR(min_uncertainty_eigenvalue(v), 0.0, 1e-14);
  EXPECT_EQ(asymmetry(v), 0);
}

TEST(GaussianState, DetectsViolation) {
  GaussianState v = GaussianState::vacuum(2);
  v.covariance *= 0.8;
  EXPECT_FALSE(satisfies_uncertainty(v));
  EXPECT_LT(min_uncertainty_eigenvalue(v), -0.05);
}

TEST(GaussianState, SqueezingIsSymplecticAndKeepsPurity) {
  Eigen::MatrixXd s = squeezer(0.7);
  EXPECT_LT(symplectic_defect(s), 1e-15);
  GaussianState sq = apply_symplectic(GaussianState::vacuum(2), s);
  EXPECT_NEAR(sq.covariance.determinant(), 0.25, 1e-14);
  EXPECT_TRUE(satisfies_uncertainty(sq));
}

TEST(GaussianState, Energies) {
  GaussianState s = GaussianState::vacuum(4);
  s.mean << 1, 2, 0, -1;
  s.covariance(0, 0) = 0.9;
  Eigen::VectorXd h(4);
  h << 2, 2, 3, 3;
  Eigen::MatrixXd H = h.asDiagonal();
  // 0.5 * [2 * 0.4] + 0.5 * [2 * 1 + 2 * 4 + 3 * 1]
  double ref = 0.4 + 6.5;
  EXPECT_NEAR(quadratic_energy(s, H), ref, 1e-14);
  EXPECT_NEAR(diagonal_energy(s, h), ref, 1e-14);
  EXPECT_EQ(quadratic_energy(GaussianState::vacuum(4), H), 0);
}

}  // namespace
}  // namespace hallqet
