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

#include <span>

#include <Eigen/Dense>

#include "hallqet/chiral_field.hpp"
#include "hallqet/params.hpp"

namespace hallqet {

// S moves toward decreasing x, U toward increasing y.
enum class Channel { kS = 0, kU = 1 };
enum class Chirality { kLeft, kRight };

constexpr Chirality chirality(Channel c) {
  return c == Channel::kS ? Chirality::kLeft : Chirality::kRight;
}

// Ring of circumference ring_length carrying modes k_n = 2 pi n / ring_length,
// n = 1..n_modes, per channel. Quadrature order: channel S then U; within a
// channel (q_1, p_1, q_2, p_2, ...). Vacuum covariance is I/2 and
// [q, p] = i.
//
//   rho_S(x) = sum_n sqrt(2) c_n (q_n cos k_n x + p_n sin k_n x)
//   rho_U(y) = sum_n sqrt(2) c_n (q_n cos k_n y - p_n sin k_n y)
//   c_n = sqrt(nu k_n / (2 pi ring_length))
struct ModeGrid {
  double ring_length = 0;
  int n_modes = 0;

  // Ring with circumference ring_factor * (L + 4l).
  static ModeGrid for_params(const ExperimentParams& p, int n_modes, double ring_factor = 8);

  int dim() const { return 4 * n_modes; }
  int channel_dim() const { return 2 * n_modes; }
  int offset(Channel c) const { return c == Channel::kS ? 0 : 2 * n_modes; }
  double k(int n) const;  // n = 0..n_modes-1
  double k_max() const { return k(n_modes - 1); }
};

// Row i holds the coefficients of rho(x_i) in the channel's 2N quadratures.
Eigen::MatrixXd density_rows(const ModeGrid& g, Channel c, double nu, std::span<const double> xs);

// Coefficients F with integral rho(x) d^order w/dx^order dx = F . r_channel.
Eigen::VectorXd smeared_density(const ModeGrid& g, Channel c, double nu, const WindowProfile& w,
                                int order);

// Embeds a channel vector into the full 4N space.
Eigen::VectorXd embed(const ModeGrid& g, Channel c, const Eigen::VectorXd& v);

}  // namespace hallqet
