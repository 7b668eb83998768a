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

#include "hallqet/mode_grid.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace hallqet {

ModeGrid ModeGrid::for_params(const ExperimentParams& p, int n_modes, double ring_factor) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be positive");
  return {ring_factor * (p.L + 4 * p.l), n_modes};
}

double ModeGrid::k(int n) const { return 2 * kPi * (n + 1) / ring_length; }

Eigen::MatrixXd density_rows(const ModeGrid& g, Channel c, double nu, std::span<const double> xs) {
  const int n = g.n_modes;
  const double psign = c == Channel::kS ? 1.0 : -1.0;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(xs.size()), 2 * n);
  for (int j = 0; j < n; ++j) {
    double kj = g.k(j);
    double amp = std::sqrt(2.0) * std::sqrt(nu * kj / (2 * kPi * g.ring_length));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out(i, 2 * j) = amp * std::cos(kj * xs[i]);
      out(i, 2 * j + 1) = psign * amp * std::sin(kj * xs[i]);
    }
  }
  return out;
}

Eigen::VectorXd smeared_density(const ModeGrid& g, Channel c, double nu, const WindowProfile& w,
                                int order) {
  const int n = g.n_modes;
  const double psign = c == Channel::kS ? 1.0 : -1.0;
  Eigen::VectorXd out(2 * n);
  for (int j = 0; j < n; ++j) {
    double kj = g.k(j);
    double amp = std::sqrt(2.0) * std::sqrt(nu * kj / (2 * kPi * g.ring_length));
    // integral e^{ikx} d^m w = (-ik)^m W(k)
    std::complex<double> t = std::pow(std::complex<double>(0, -kj), order) * w.fourier(kj);
    out(2 * j) = amp * t.real();
    out(2 * j + 1) = psign * amp * t.imag();
  }
  return out;
}

Eigen::VectorXd embed(const ModeGrid& g, Channel c, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.dim());
  out.segment(g.offset(c), g.channel_dim()) = v;
  return out;
}

}  // namespace hallqet
