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
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hallqet/gaussian_state.hpp"
#include "hallqet/mode_grid.hpp"
#include "hallqet/params.hpp"

namespace hallqet {

// H = r^T H r / 2 with H = diag(free) + [[0, K], [K^T, 0]] (S block first).
struct QuadraticHamiltonians {
  Eigen::VectorXd omega;      // angular frequency per mode, both channels
  Eigen::VectorXd free_diag;  // hbar omega per quadrature, length 4N
  Eigen::MatrixXd coupling;   // K, 2N x 2N: H_int = r_S^T K r_U
  // K ~= factor_s * factor_u^T, used by the propagator.
  Eigen::MatrixXd factor_s;
  Eigen::MatrixXd factor_u;

  Eigen::MatrixXd h_s() const;
  Eigen::MatrixXd h_u() const;
  Eigen::MatrixXd h_int() const;
};

// The Coulomb form kappa integral_{[0,b]^2} rho_S(x) f(x, y) rho_U(y) is
// evaluated with Gauss-Legendre nodes (count chosen from k_max b unless given).
QuadraticHamiltonians build_hamiltonians(const ExperimentParams& p, const ModeGrid& grid,
                                         int coulomb_nodes = 0);

// Gaussian pointer readout of v = o.r + noise: conditioning of (state x
// pointer) on the pointer position, with the back-action of the coupling
// kept. Predictive law of v: N(o.m, pointer_sd^2 + o^T sigma o).
struct PointerConditioning {
  double predictive_mean = 0;
  double predictive_variance = 0;
  Eigen::VectorXd gain;  // posterior mean shift per volt of (v - predictive_mean)
  Eigen::MatrixXd posterior_covariance;
};

PointerConditioning condition_on_pointer(const GaussianState& prior, const Eigen::VectorXd& o,
                                         double pointer_sd);
GaussianState posterior_state(const GaussianState& prior, const PointerConditioning& c,
                              double outcome);

struct MeasurementOutcome {
  double outcome = 0;
  GaussianState posterior;
};

MeasurementOutcome measure_gaussian(const GaussianState& state, const Eigen::VectorXd& observable,
                                    double pointer_sd, std::mt19937_64& rng);

// R dQ_S/dt(0) = -e v_g R integral rho_S dw_A/dx as a linear form (V).
Eigen::VectorXd measured_observable(const ExperimentParams& p, const ModeGrid& grid);

// Mean shift of U per volt of outcome from exp(i (pi v / nu_U dV) integral lambda_B rho_U).
Eigen::VectorXd feedback_displacement(const ExperimentParams& p, const ModeGrid& grid);

GaussianState displace_feedback(const GaussianState& state, double outcome,
                                const ExperimentParams& p, const ModeGrid& grid);

struct EvolutionOptions {
  double ramp_fraction = 0.05;  // sin^2 switch-on and switch-off of H_int
  double step_fraction = 0.01;  // step <= step_fraction * 2 pi / (v_g k_max)
  bool check_uncertainty = true;
};

struct TimeSpan {
  double t0 = 0;
  double t1 = 0;
};

// Left-multiplies by the free flow over time t.
void apply_free_rows(Eigen::Ref<Eigen::MatrixXd> m, const Eigen::VectorXd& omega, double t);
Eigen::MatrixXd free_propagator(const QuadraticHamiltonians& h, double t);

struct Propagator {
  Eigen::MatrixXd S;
  std::size_t steps = 0;
  double ramp_step = 0;
  double plateau_step = 0;
  double symplectic_defect = 0;
};

// Symplectic map of H_S + H_U + coupling_scale s(t) H_int over the span,
// with s the ramp profile. Strang splitting: exact free rotations around an
// exact low-rank interaction exponential; the constant plateau is one step
// raised to a power.
Propagator window_propagator(const QuadraticHamiltonians& h, TimeSpan span,
                             double coupling_scale, const EvolutionOptions& opts = {});

// Throws StepInstability if the evolved covariance violates the uncertainty
// relation (when opts.check_uncertainty).
GaussianState evolve(const GaussianState& state, const QuadraticHamiltonians& h, TimeSpan span,
                     double coupling_scale, const EvolutionOptions& opts = {});

// (pi hbar v_g / nu) <:rho(x)^2:> in J/m.
std::vector<double> local_energy_density(const GaussianState& state, const ModeGrid& grid,
                                         Channel channel, double nu, double v_g,
                                         std::span<const double> xs);

struct ProtocolTimes {
  double T = 0;       // feedback time
  double t_star = 0;  // packet centre reaches the middle of B
  double t_i = 0;
  double t_f = 0;
};

ProtocolTimes protocol_times(const ExperimentParams& p);

enum class FeedbackMode { kCorrelated, kScrambled, kOff };

std::string_view feedback_name(FeedbackMode m);
bool parse_feedback(std::string_view s, FeedbackMode& out);

struct ShotRecord {
  double outcome = 0;           // V
  double feedback_outcome = 0;  // V applied at U
  double E_A = 0;               // J
  double E_1 = 0;               // J, U energy after feedback
  double E_B = 0;               // J, U energy change over the window
  double delta_E_S = 0;         // J, S energy change over the window
};

struct ProfileSnapshot {
  std::string label;
  double time = 0;
  Channel channel = Channel::kS;
  std::vector<double> values;  // J/m on ProtocolResult::x_grid
};

struct ProtocolResult {
  FeedbackMode feedback_mode = FeedbackMode::kCorrelated;
  std::size_t n_shots = 0;
  std::uint64_t seed = 0;
  double coupling_scale = 0;
  int n_modes = 0;
  double ring_length = 0;
  ProtocolTimes times;

  // Shot averages and their standard errors.
  double E_A_oracle = 0, E_A_stderr = 0;
  double E_1_oracle = 0, E_1_stderr = 0;
  double E_B_oracle = 0, E_B_stderr = 0;
  double delta_E_S = 0, delta_E_S_stderr = 0;

  // Exact expectations over the outcome law (no sampling noise).
  double E_A_ensemble = 0;
  double E_1_ensemble = 0;
  double E_B_ensemble = 0;
  double delta_E_S_ensemble = 0;

  double outcome_variance = 0;  // predictive variance of v
  std::vector<double> outcome_samples;
  std::vector<ShotRecord> shots;

  std::vector<double> x_grid;
  std::vector<double> energy_density_profile;  // S after the window, shot averaged
  std::vector<ProfileSnapshot> profiles;

  double symplectic_defect = 0;
  std::size_t evolution_steps = 0;
};

struct ProtocolOptions {
  double coupling_scale = 1.0;
  EvolutionOptions evolution;
  int profile_oversampling = 8;  // profile points per mode
};

// Sampled shots: vacuum; Gaussian readout at A (t = 0); free flight to T;
// feedback at U; free flight to t_i (backwards when t_i < T, which is how the
// interaction-picture input state is built); interacting window to t_f.
// Covariances do not depend on outcomes and are propagated once; every shot
// mean is the outcome-weighted sum of two propagated response vectors.
class ProtocolSimulator {
 public:
  ProtocolSimulator(const ValidatedParams& p, const ModeGrid& grid, const ProtocolOptions& opts);

  ProtocolResult run(FeedbackMode mode, std::size_t n_shots, std::uint64_t seed) const;

  // Shot-averaged energy density of a channel at time t outside the window
  // (t <= t_i or t >= t_f), given second moments of (v, v_fb).
  std::vector<double> profile_at(Channel c, double t, double m_vv, double m_vf, double m_ff,
                                 bool interacting = true) const;

  const ModeGrid& grid() const { return grid_; }
  const QuadraticHamiltonians& hamiltonians() const { return h_; }
  const ProtocolTimes& times() const { return times_; }
  const std::vector<double>& x_grid() const { return xs_; }
  const PointerConditioning& conditioning() const { return cond_; }
  double delta_v() const { return dv_; }
  const Propagator& window() const { return window_; }

 private:
  struct Stage {
    Eigen::VectorXd a;  // mean per volt of v
    Eigen::VectorXd b;  // mean per volt of v_fb
    Eigen::MatrixXd cov;
  };
  Stage stage_at(double t, bool interacting) const;
  double channel_form(Channel c, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double channel_cov_energy(Channel c, const Eigen::MatrixXd& cov) const;
  std::vector<double> profile(Channel c, const Stage& s, double m_vv, double m_vf,
                              double m_ff) const;

  ExperimentParams p_;
  ModeGrid grid_;
  ProtocolOptions opts_;
  QuadraticHamiltonians h_;
  ProtocolTimes times_;
  double dv_ = 0;
  PointerConditioning cond_;
  Eigen::VectorXd disp_;
  Propagator window_;
  Stage initial_;  // at t_i
  Stage final_;    // at t_f
  std::vector<double> xs_;
  Eigen::MatrixXd rows_s_, rows_u_;
};

ProtocolResult run_protocol(const ValidatedParams& p, const ModeGrid& grid, FeedbackMode mode,
                            std::size_t n_shots, std::uint64_t seed,
                            const ProtocolOptions& opts = {});

// 64-bit mix used to derive per-shot RNG seeds from (seed, index).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

// integral x eps / integral eps over [lo, hi] on a uniform grid.
double profile_centroid(std::span<const double> xs, std::span<const double> values, double lo,
                        double hi);

struct NegativeRegion {
  bool found = false;
  double lo = 0;
  double hi = 0;
  double integral = 0;  // J
  double min_value = 0;
};

// Connected run of negative values with the most negative integral among
// runs that intersect [center - half_width, center + half_width].
NegativeRegion find_negative_region(std::span<const double> xs, std::span<const double> values,
                                    double center, double half_width);

}  // namespace hallqet
