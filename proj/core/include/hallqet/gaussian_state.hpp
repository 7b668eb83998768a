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

#include <Eigen/Dense>

namespace hallqet {

// Block diagonal [[0, 1], [-1, 0]] over `pairs` (q, p) pairs.
Eigen::MatrixXd symplectic_form(int pairs);

struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  static GaussianState vacuum(int dim);
  int dim() const { return static_cast<int>(mean.size()); }
};

// max |sigma - sigma^T|
double asymmetry(const GaussianState& s);

// Smallest eigenvalue of sigma + (i/2) Omega (dense Hermitian solve).
double min_uncertainty_eigenvalue(const GaussianState& s);

// Cheap test of sigma + (i/2) Omega + tol I > 0 by complex Cholesky.
bool satisfies_uncertainty(const GaussianState& s, double tol = 1e-9);

// max |S Omega S^T - Omega|
double symplectic_defect(const Eigen::MatrixXd& S);

// Normal-ordered energy of H = r^T H r / 2: tr(H (sigma - I/2)) / 2 + m^T H m / 2.
double quadratic_energy(const GaussianState& s, const Eigen::MatrixXd& H);
// Same for a diagonal H, given as its diagonal.
double diagonal_energy(const GaussianState& s, const Eigen::VectorXd& h_diag);

// m -> S m, sigma -> S sigma S^T
GaussianState apply_symplectic(const GaussianState& s, const Eigen::MatrixXd& S);

}  // namespace hallqet
