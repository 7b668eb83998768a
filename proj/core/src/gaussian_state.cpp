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

#include "hallqet/gaussian_state.hpp"

#include <Eigen/Eigenvalues>

namespace hallqet {

Eigen::MatrixXd symplectic_form(int pairs) {
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(2 * pairs, 2 * pairs);
  for (int j = 0; j < pairs; ++j) {
    om(2 * j, 2 * j + 1) = 1;
    om(2 * j + 1, 2 * j) = -1;
  }
  return om;
}

GaussianState GaussianState::vacuum(int dim) {
  return {Eigen::VectorXd::Zero(dim), 0.5 * Eigen::MatrixXd::Identity(dim, dim)};
}

double asymmetry(const GaussianState& s) {
  return (s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff();
}

namespace {

Eigen::MatrixXcd uncertainty_matrix(const GaussianState& s) {
  Eigen::MatrixXcd m = s.covariance.cast<std::complex<double>>();
  const int n = s.dim();
  for (int j = 0; j + 1 < n; j += 2) {
    m(j, j + 1) += std::complex<double>(0, 0.5);
    m(j + 1, j) -= std::complex<double>(0, 0.5);
  }
  return m;
}

}  // namespace

double min_uncertainty_eigenvalue(const GaussianState& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(uncertainty_matrix(s), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool satisfies_uncertainty(const GaussianState& s, double tol) {
  Eigen::MatrixXcd m = uncertainty_matrix(s);
  m.diagonal().array() += tol;
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  return llt.info() == Eigen::Success;
}

double symplectic_defect(const Eigen::MatrixXd& S) {
  Eigen::MatrixXd om = symplectic_form(static_cast<int>(S.rows() / 2));
  return (S * om * S.transpose() - om).cwiseAbs().maxCoeff();
}

double quadratic_energy(const GaussianState& s, const Eigen::MatrixXd& H) {
  double tr = (H.cwiseProduct(s.covariance)).sum() - 0.5 * H.trace();
  return 0.5 * tr + 0.5 * s.mean.dot(H * s.mean);
}

double diagonal_energy(const GaussianState& s, const Eigen::VectorXd& h_diag) {
  double e = 0;
  for (Eigen::Index i = 0; i < h_diag.size(); ++i) {
    e += h_diag(i) * (s.covariance(i, i) - 0.5 + s.mean(i) * s.mean(i));
  }
  return 0.5 * e;
}

GaussianState apply_symplectic(const GaussianState& s, const Eigen::MatrixXd& S) {
  GaussianState out;
  out.mean = S * s.mean;
  Eigen::MatrixXd tmp = S * s.covariance;
  out.covariance.noalias() = tmp * S.transpose();
  return out;
}

}  // namespace hallqet
