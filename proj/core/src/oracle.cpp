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

#include "hallqet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "hallqet/chiral_field.hpp"
#include "hallqet/detector.hpp"
#include "hallqet/errors.hpp"
#include "hallqet/quadrature.hpp"

namespace hallqet {

namespace {

constexpr double kHbar = PhysicalConstants::hbar;

// Apply Omega (block [[0,1],[-1,0]]) to a vector.
Eigen::VectorXd apply_omega(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index j = 0; j + 1 < v.size(); j += 2) {
    out(j) = v(j + 1);
    out(j + 1) = -v(j);
  }
  return out;
}

Eigen::MatrixXd apply_omega_rows(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j + 1 < m.rows(); j += 2) {
    out.row(j) = m.row(j + 1);
    out.row(j + 1) = -m.row(j);
  }
  return out;
}

void rotate_both_sides(Eigen::MatrixXd& cov, const Eigen::VectorXd& omega, double t) {
  apply_free_rows(cov, omega, t);
  cov.transposeInPlace();
  apply_free_rows(cov, omega, t);
  cov.transposeInPlace();
}

double ramp(double tau, double rf) {
  if (rf <= 0) return 1.0;
  if (tau < rf) {
    double s = std::sin(0.5 * kPi * tau / rf);
    return s * s;
  }
  if (tau > 1 - rf) {
    double s = std::sin(0.5 * kPi * (1 - tau) / rf);
    return s * s;
  }
  return 1.0;
}

// exp(tau Omega Z J Z^T) = I + P Phi Z^T with P = Omega Z, Phi = phi1(tau J G) tau J.
class LowRankStep {
 public:
  explicit LowRankStep(const QuadraticHamiltonians& h) : n2_(h.factor_s.rows()) {
    xs_ = h.factor_s;
    xu_ = h.factor_u;
    r_ = xs_.cols();
    ps_ = apply_omega_rows(xs_);
    pu_ = apply_omega_rows(xu_);
    g_ = Eigen::MatrixXd::Zero(2 * r_, 2 * r_);
    g_.topLeftCorner(r_, r_) = xs_.transpose() * ps_;
    g_.bottomRightCorner(r_, r_) = xu_.transpose() * pu_;
  }

  Eigen::MatrixXd phi(double tau) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * r_, 2 * r_);
    m.topRightCorner(r_, r_).setIdentity();
    m.bottomLeftCorner(r_, r_).setIdentity();
    m *= tau;
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(4 * r_, 4 * r_);
    aug.topLeftCorner(2 * r_, 2 * r_) = m * g_;
    aug.topRightCorner(2 * r_, 2 * r_).setIdentity();
    Eigen::MatrixXd e = aug.exp();
    return e.topRightCorner(2 * r_, 2 * r_) * m;
  }

  void apply(Eigen::MatrixXd& x, const Eigen::MatrixXd& phi) const {
    Eigen::MatrixXd y(2 * r_, x.cols());
    y.topRows(r_).noalias() = xs_.transpose() * x.topRows(n2_);
    y.bottomRows(r_).noalias() = xu_.transpose() * x.bottomRows(n2_);
    Eigen::MatrixXd t = phi * y;
    x.topRows(n2_).noalias() += ps_ * t.topRows(r_);
    x.bottomRows(n2_).noalias() += pu_ * t.bottomRows(r_);
  }

 private:
  Eigen::Index n2_;
  Eigen::Index r_ = 0;
  Eigen::MatrixXd xs_, xu_, ps_, pu_, g_;
};

}  // namespace

Eigen::MatrixXd QuadraticHamiltonians::h_s() const {
  Eigen::VectorXd d = free_diag;
  d.tail(d.size() / 2).setZero();
  return d.asDiagonal();
}

Eigen::MatrixXd QuadraticHamiltonians::h_u() const {
  Eigen::VectorXd d = free_diag;
  d.head(d.size() / 2).setZero();
  return d.asDiagonal();
}

Eigen::MatrixXd QuadraticHamiltonians::h_int() const {
  const Eigen::Index n2 = coupling.rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n2, 2 * n2);
  h.topRightCorner(n2, n2) = coupling;
  h.bottomLeftCorner(n2, n2) = coupling.transpose();
  return h;
}

QuadraticHamiltonians build_hamiltonians(const ExperimentParams& p, const ModeGrid& grid,
                                         int coulomb_nodes) {
  const int n = grid.n_modes;
  QuadraticHamiltonians h;
  h.omega.resize(n);
  h.free_diag.resize(grid.dim());
  for (int j = 0; j < n; ++j) {
    h.omega(j) = p.v_g * grid.k(j);
    for (int c = 0; c < 2; ++c) {
      h.free_diag(c * 2 * n + 2 * j) = kHbar * h.omega(j);
      h.free_diag(c * 2 * n + 2 * j + 1) = kHbar * h.omega(j);
    }
  }
  int nodes = coulomb_nodes > 0
                  ? coulomb_nodes
                  : std::max(64, static_cast<int>(0.75 * grid.k_max() * p.b) + 32);
  std::vector<double> t, w;
  gauss_legendre(nodes, t, w);
  std::vector<double> xs(nodes);
  Eigen::VectorXd sw(nodes);
  for (int i = 0; i < nodes; ++i) {
    xs[i] = 0.5 * (t[i] + 1) * p.b;
    sw(i) = std::sqrt(0.5 * w[i] * p.b);
  }
  Eigen::MatrixXd f(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      double dx = xs[i] - xs[j];
      f(i, j) = sw(i) * sw(j) / std::sqrt(dx * dx + p.d * p.d);
    }
  }
  const double kappa = PhysicalConstants::e_charge * PhysicalConstants::e_charge /
                       (4 * kPi * p.eps());
  Eigen::MatrixXd phs = sw.asDiagonal() * density_rows(grid, Channel::kS, p.nu_S, xs);
  Eigen::MatrixXd phu = sw.asDiagonal() * density_rows(grid, Channel::kU, p.nu_U, xs);
  h.coupling = kappa * phs.transpose() * f * phu;

  // f is a positive definite kernel; keep the numerically relevant spectrum.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
  const Eigen::VectorXd& lam = es.eigenvalues();
  double lmax = lam.maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < nodes; ++i) {
    if (lam(i) > 1e-14 * lmax) keep.push_back(i);
  }
  Eigen::MatrixXd q(nodes, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    q.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]) *
                                          std::sqrt(kappa * lam(keep[i]));
  }
  h.factor_s = phs.transpose() * q;
  h.factor_u = phu.transpose() * q;
  return h;
}

PointerConditioning condition_on_pointer(const GaussianState& prior, const Eigen::VectorXd& o,
                                         double pointer_sd) {
  if (!(pointer_sd > 0)) throw std::invalid_argument("pointer_sd must be positive");
  PointerConditioning c;
  Eigen::VectorXd s = prior.covariance * o;
  double var_o = o.dot(s);
  if (!(var_o > 1e-300) || !std::isfinite(var_o)) {
    throw DegenerateObservable("observable variance " + std::to_string(var_o) +
                               " underflows in the prior state");
  }
  c.predictive_mean = o.dot(prior.mean);
  c.predictive_variance = pointer_sd * pointer_sd + var_o;
  c.gain = s / c.predictive_variance;
  // Pointer momentum kicks the system along Omega o (back-action), then the
  // position readout removes the correlated part.
  Eigen::VectorXd kick = apply_omega(o);
  c.posterior_covariance = prior.covariance;
  c.posterior_covariance.noalias() += kick * kick.transpose() / (4 * pointer_sd * pointer_sd);
  c.posterior_covariance.noalias() -= s * s.transpose() / c.predictive_variance;
  return c;
}

GaussianState posterior_state(const GaussianState& prior, const PointerConditioning& c,
                              double outcome) {
  return {prior.mean + c.gain * (outcome - c.predictive_mean), c.posterior_covariance};
}

MeasurementOutcome measure_gaussian(const GaussianState& state, const Eigen::VectorXd& observable,
                                    double pointer_sd, std::mt19937_64& rng) {
  PointerConditioning c = condition_on_pointer(state, observable, pointer_sd);
  std::normal_distribution<double> dist(c.predictive_mean, std::sqrt(c.predictive_variance));
  double v = dist(rng);
  return {v, posterior_state(state, c, v)};
}

Eigen::VectorXd measured_observable(const ExperimentParams& p, const ModeGrid& grid) {
  double evr = PhysicalConstants::e_charge * p.v_g * p.R;
  return embed(grid, Channel::kS, -evr * smeared_density(grid, Channel::kS, p.nu_S, window_A(p), 1));
}

Eigen::VectorXd feedback_displacement(const ExperimentParams& p, const ModeGrid& grid) {
  double dv = delta_v(rc_detector(p));
  Eigen::VectorXd lam = embed(grid, Channel::kU, smeared_density(grid, Channel::kU, p.nu_U, window_B(p), 0));
  return -(kPi / (p.nu_U * dv)) * apply_omega(lam);
}

GaussianState displace_feedback(const GaussianState& state, double outcome,
                                const ExperimentParams& p, const ModeGrid& grid) {
  GaussianState out = state;
  if (outcome != 0) out.mean += outcome * feedback_displacement(p, grid);
  return out;
}

void apply_free_rows(Eigen::Ref<Eigen::MatrixXd> m, const Eigen::VectorXd& omega, double t) {
  const Eigen::Index n = omega.size();
  if (m.rows() != 4 * n) throw std::invalid_argument("apply_free_rows: dimension mismatch");
  for (Eigen::Index j = 0; j < n; ++j) {
    double c = std::cos(omega(j) * t), s = std::sin(omega(j) * t);
    for (Eigen::Index off : {Eigen::Index{0}, 2 * n}) {
      Eigen::Index a = off + 2 * j;
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        double q = m(a, col), pp = m(a + 1, col);
        m(a, col) = c * q + s * pp;
        m(a + 1, col) = -s * q + c * pp;
      }
    }
  }
}

Eigen::MatrixXd free_propagator(const QuadraticHamiltonians& h, double t) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(h.free_diag.size(), h.free_diag.size());
  apply_free_rows(s, h.omega, t);
  return s;
}

Propagator window_propagator(const QuadraticHamiltonians& h, TimeSpan span,
                             double coupling_scale, const EvolutionOptions& opts) {
  const double dur = span.t1 - span.t0;
  Propagator out;
  if (!(dur >= 0)) throw std::invalid_argument("window_propagator: t1 < t0");
  if (coupling_scale == 0 || h.factor_s.cols() == 0 || dur == 0) {
    out.S = free_propagator(h, dur);
    out.symplectic_defect = symplectic_defect(out.S);
    return out;
  }
  const double rf = std::clamp(opts.ramp_fraction, 0.0, 0.5);
  const double h_max = opts.step_fraction * 2 * kPi / h.omega.maxCoeff();
  const std::size_t n_ramp =
      rf > 0 ? static_cast<std::size_t>(std::ceil(rf * dur / h_max)) : 0;
  const double plateau = (1 - 2 * rf) * dur;
  const std::size_t n_mid = plateau > 0 ? static_cast<std::size_t>(std::ceil(plateau / h_max)) : 0;
  const double h_r = n_ramp ? rf * dur / n_ramp : 0;
  const double h_m = n_mid ? plateau / n_mid : 0;
  out.ramp_step = h_r;
  out.plateau_step = h_m;

  LowRankStep step(h);
  auto strang = [&](Eigen::MatrixXd& x, double hstep, double s) {
    apply_free_rows(x, h.omega, 0.5 * hstep);
    step.apply(x, step.phi(coupling_scale * s * hstep / kHbar));
    apply_free_rows(x, h.omega, 0.5 * hstep);
  };

  const Eigen::Index d = h.free_diag.size();
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t k = 0; k < n_ramp; ++k) {
    strang(x, h_r, ramp(((k + 0.5) * h_r) / dur, rf));
  }
  if (n_mid) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d);
    strang(g, h_m, 1.0);
    Eigen::MatrixXd acc = x;
    std::size_t e = n_mid;
    Eigen::MatrixXd tmp(d, d);
    while (e) {
      if (e & 1) {
        tmp.noalias() = g * acc;
        acc.swap(tmp);
      }
      e >>= 1;
      if (e) {
        tmp.noalias() = g * g;
        g.swap(tmp);
      }
    }
    x.swap(acc);
  }
  const double t_down = (1 - rf) * dur;
  for (std::size_t k = 0; k < n_ramp; ++k) {
    strang(x, h_r, ramp((t_down + (k + 0.5) * h_r) / dur, rf));
  }
  out.S = std::move(x);
  out.steps = 2 * n_ramp + n_mid;
  out.symplectic_defect = symplectic_defect(out.S);
  return out;
}

GaussianState evolve(const GaussianState& state, const QuadraticHamiltonians& h, TimeSpan span,
                     double coupling_scale, const EvolutionOptions& opts) {
  Propagator prop = window_propagator(h, span, coupling_scale, opts);
  GaussianState out = apply_symplectic(state, prop.S);
  if (opts.check_uncertainty && !satisfies_uncertainty(out)) {
    throw StepInstability("covariance violates the uncertainty relation after evolution");
  }
  return out;
}

std::vector<double> local_energy_density(const GaussianState& state, const ModeGrid& grid,
                                         Channel channel, double nu, double v_g,
                                         std::span<const double> xs) {
  const int off = grid.offset(channel), n2 = grid.channel_dim();
  Eigen::MatrixXd rows = density_rows(grid, channel, nu, xs);
  Eigen::MatrixXd block = state.covariance.block(off, off, n2, n2);
  block.diagonal().array() -= 0.5;
  Eigen::VectorXd m = state.mean.segment(off, n2);
  Eigen::MatrixXd rb = rows * block;
  Eigen::VectorXd rm = rows * m;
  const double pref = kPi * kHbar * v_g / nu;
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = pref * (rb.row(i).dot(rows.row(i)) + rm(i) * rm(i));
  }
  return out;
}

ProtocolTimes protocol_times(const ExperimentParams& p) {
  ProtocolTimes t;
  t.T = p.delay_time();
  t.t_star = t.T + p.L / p.v_g;
  t.t_i = t.t_star - (0.5 * p.b + 4 * p.sigma_B) / p.v_g;
  t.t_f = t.t_i + (p.b + 8 * p.sigma_B) / p.v_g;
  return t;
}

std::string_view feedback_name(FeedbackMode m) {
  switch (m) {
    case FeedbackMode::kCorrelated: return "correlated";
    case FeedbackMode::kScrambled: return "scrambled";
    case FeedbackMode::kOff: return "off";
  }
  return "?";
}

bool parse_feedback(std::string_view s, FeedbackMode& out) {
  for (auto m : {FeedbackMode::kCorrelated, FeedbackMode::kScrambled, FeedbackMode::kOff}) {
    if (s == feedback_name(m)) {
      out = m;
      return true;
    }
  }
  return false;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ProtocolSimulator::ProtocolSimulator(const ValidatedParams& vp, const ModeGrid& grid,
                                     const ProtocolOptions& opts)
    : p_(vp.get()), grid_(grid), opts_(opts) {
  const double min_ring = 8 * (p_.L + 4 * p_.l);
  if (grid_.ring_length < min_ring * (1 - 1e-12)) {
    throw ValidationError({"ring length " + std::to_string(grid_.ring_length) +
                           " m is below 8 (L + 4l) = " + std::to_string(min_ring) + " m"});
  }
  h_ = build_hamiltonians(p_, grid_);
  times_ = protocol_times(p_);
  dv_ = hallqet::delta_v(rc_detector(p_));
  const int d = grid_.dim();
  cond_ = condition_on_pointer(GaussianState::vacuum(d), measured_observable(p_, grid_), dv_);
  disp_ = feedback_displacement(p_, grid_);
  const bool check = opts_.evolution.check_uncertainty;
  if (check && !satisfies_uncertainty({Eigen::VectorXd::Zero(d), cond_.posterior_covariance})) {
    throw StepInstability("post-measurement covariance violates the uncertainty relation");
  }

  initial_.a = cond_.gain;
  apply_free_rows(initial_.a, h_.omega, times_.t_i);
  initial_.b = disp_;
  apply_free_rows(initial_.b, h_.omega, times_.t_i - times_.T);
  initial_.cov = cond_.posterior_covariance;
  rotate_both_sides(initial_.cov, h_.omega, times_.t_i);

  window_ = window_propagator(h_, {times_.t_i, times_.t_f}, opts_.coupling_scale, opts_.evolution);
  final_.a = window_.S * initial_.a;
  final_.b = window_.S * initial_.b;
  Eigen::MatrixXd tmp = window_.S * initial_.cov;
  final_.cov.noalias() = tmp * window_.S.transpose();
  final_.cov = 0.5 * (final_.cov + final_.cov.transpose()).eval();
  if (check && !satisfies_uncertainty({Eigen::VectorXd::Zero(d), final_.cov})) {
    throw StepInstability("covariance violates the uncertainty relation after the window");
  }

  const int npts = std::max(4, opts_.profile_oversampling) * grid_.n_modes;
  xs_.resize(npts);
  for (int i = 0; i < npts; ++i) {
    xs_[i] = -0.5 * grid_.ring_length + grid_.ring_length * i / npts;
  }
  rows_s_ = density_rows(grid_, Channel::kS, p_.nu_S, xs_);
  rows_u_ = density_rows(grid_, Channel::kU, p_.nu_U, xs_);
}

ProtocolSimulator::Stage ProtocolSimulator::stage_at(double t, bool interacting) const {
  Stage s;
  if (t <= times_.t_i) {
    s.a = cond_.gain;
    apply_free_rows(s.a, h_.omega, t);
    if (t >= times_.T) {
      s.b = disp_;
      apply_free_rows(s.b, h_.omega, t - times_.T);
    } else {
      s.b = Eigen::VectorXd::Zero(grid_.dim());
    }
    s.cov = cond_.posterior_covariance;
    rotate_both_sides(s.cov, h_.omega, t);
    return s;
  }
  if (t < times_.t_f) throw std::invalid_argument("profile time inside the interaction window");
  if (interacting) {
    s = final_;
    double dt = t - times_.t_f;
    if (dt != 0) {
      apply_free_rows(s.a, h_.omega, dt);
      apply_free_rows(s.b, h_.omega, dt);
      rotate_both_sides(s.cov, h_.omega, dt);
    }
  } else {
    s = initial_;
    double dt = t - times_.t_i;
    apply_free_rows(s.a, h_.omega, dt);
    apply_free_rows(s.b, h_.omega, dt);
    rotate_both_sides(s.cov, h_.omega, dt);
  }
  return s;
}

double ProtocolSimulator::channel_form(Channel c, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v) const {
  const int off = grid_.offset(c), n2 = grid_.channel_dim();
  double e = 0;
  for (int i = off; i < off + n2; ++i) e += h_.free_diag(i) * u(i) * v(i);
  return e;
}

double ProtocolSimulator::channel_cov_energy(Channel c, const Eigen::MatrixXd& cov) const {
  const int off = grid_.offset(c), n2 = grid_.channel_dim();
  double e = 0;
  for (int i = off; i < off + n2; ++i) e += h_.free_diag(i) * (cov(i, i) - 0.5);
  return 0.5 * e;
}

std::vector<double> ProtocolSimulator::profile(Channel c, const Stage& s, double m_vv, double m_vf,
                                               double m_ff) const {
  const int off = grid_.offset(c), n2 = grid_.channel_dim();
  const Eigen::MatrixXd& rows = c == Channel::kS ? rows_s_ : rows_u_;
  Eigen::MatrixXd block = s.cov.block(off, off, n2, n2);
  block.diagonal().array() -= 0.5;
  Eigen::MatrixXd rb = rows * block;
  Eigen::VectorXd ra = rows * s.a.segment(off, n2);
  Eigen::VectorXd rbv = rows * s.b.segment(off, n2);
  const double nu = c == Channel::kS ? p_.nu_S : p_.nu_U;
  const double pref = kPi * kHbar * p_.v_g / nu;
  std::vector<double> out(xs_.size());
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    out[i] = pref * (rb.row(i).dot(rows.row(i)) + m_vv * ra(i) * ra(i) +
                     2 * m_vf * ra(i) * rbv(i) + m_ff * rbv(i) * rbv(i));
  }
  return out;
}

std::vector<double> ProtocolSimulator::profile_at(Channel c, double t, double m_vv, double m_vf,
                                                  double m_ff, bool interacting) const {
  return profile(c, stage_at(t, interacting), m_vv, m_vf, m_ff);
}

ProtocolResult ProtocolSimulator::run(FeedbackMode mode, std::size_t n_shots,
                                      std::uint64_t seed) const {
  if (n_shots == 0) throw std::invalid_argument("n_shots must be positive");
  ProtocolResult r;
  r.feedback_mode = mode;
  r.n_shots = n_shots;
  r.seed = seed;
  r.coupling_scale = opts_.coupling_scale;
  r.n_modes = grid_.n_modes;
  r.ring_length = grid_.ring_length;
  r.times = times_;
  r.outcome_variance = cond_.predictive_variance;
  r.symplectic_defect = window_.symplectic_defect;
  r.evolution_steps = window_.steps;

  const double sd = std::sqrt(cond_.predictive_variance);
  std::vector<double> v(n_shots), fb(n_shots, 0.0);
  for (std::size_t i = 0; i < n_shots; ++i) {
    std::mt19937_64 rng(stream_seed(seed, i));
    std::normal_distribution<double> dist(cond_.predictive_mean, sd);
    v[i] = dist(rng);
  }
  if (mode == FeedbackMode::kCorrelated) {
    fb = v;
  } else if (mode == FeedbackMode::kScrambled) {
    std::mt19937_64 rng(stream_seed(seed ^ 0x5C4A3B1E5C4A3B1Eull, n_shots));
    if (n_shots == 1) {
      std::normal_distribution<double> dist(cond_.predictive_mean, sd);
      fb[0] = dist(rng);
    } else {
      // Sattolo: a single cycle, so no shot keeps its own outcome.
      std::vector<std::size_t> perm(n_shots);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = n_shots - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(perm[i], perm[pick(rng)]);
      }
      for (std::size_t i = 0; i < n_shots; ++i) fb[i] = v[perm[i]];
    }
  }

  const Channel S = Channel::kS, U = Channel::kU;
  const double cov_a = channel_cov_energy(S, cond_.posterior_covariance);
  const double gg = channel_form(S, cond_.gain, cond_.gain);
  const double dd = channel_form(U, disp_, disp_);
  struct Window {
    double cov, aa, ab, bb;
  };
  auto window_forms = [&](Channel c) {
    Window w;
    w.cov = channel_cov_energy(c, final_.cov) - channel_cov_energy(c, initial_.cov);
    w.aa = channel_form(c, final_.a, final_.a) - channel_form(c, initial_.a, initial_.a);
    w.ab = channel_form(c, final_.a, final_.b) - channel_form(c, initial_.a, initial_.b);
    w.bb = channel_form(c, final_.b, final_.b) - channel_form(c, initial_.b, initial_.b);
    return w;
  };
  const Window wu = window_forms(U), ws = window_forms(S);
  auto window_energy = [](const Window& w, double x, double y) {
    return w.cov + 0.5 * (w.aa * x * x + 2 * w.ab * x * y + w.bb * y * y);
  };

  r.shots.resize(n_shots);
  r.outcome_samples = v;
  double m_vv = 0, m_vf = 0, m_ff = 0;
  for (std::size_t i = 0; i < n_shots; ++i) {
    ShotRecord& s = r.shots[i];
    s.outcome = v[i];
    s.feedback_outcome = fb[i];
    s.E_A = cov_a + 0.5 * gg * v[i] * v[i];
    s.E_1 = 0.5 * dd * fb[i] * fb[i];
    s.E_B = window_energy(wu, v[i], fb[i]);
    s.delta_E_S = window_energy(ws, v[i], fb[i]);
    m_vv += v[i] * v[i];
    m_vf += v[i] * fb[i];
    m_ff += fb[i] * fb[i];
  }
  const double n = static_cast<double>(n_shots);
  m_vv /= n;
  m_vf /= n;
  m_ff /= n;

  auto mean_err = [&](auto field, double& mean, double& err) {
    double s = 0;
    for (const auto& shot : r.shots) s += shot.*field;
    mean = s / n;
    double ss = 0;
    for (const auto& shot : r.shots) ss += (shot.*field - mean) * (shot.*field - mean);
    err = n_shots > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  };
  mean_err(&ShotRecord::E_A, r.E_A_oracle, r.E_A_stderr);
  mean_err(&ShotRecord::E_1, r.E_1_oracle, r.E_1_stderr);
  mean_err(&ShotRecord::E_B, r.E_B_oracle, r.E_B_stderr);
  mean_err(&ShotRecord::delta_E_S, r.delta_E_S, r.delta_E_S_stderr);

  const double V = cond_.predictive_variance;
  const double e_vf = mode == FeedbackMode::kCorrelated ? V : 0.0;
  const double e_ff = mode == FeedbackMode::kOff ? 0.0 : V;
  r.E_A_ensemble = cov_a + 0.5 * gg * V;
  r.E_1_ensemble = 0.5 * dd * e_ff;
  r.E_B_ensemble = wu.cov + 0.5 * (wu.aa * V + 2 * wu.ab * e_vf + wu.bb * e_ff);
  r.delta_E_S_ensemble = ws.cov + 0.5 * (ws.aa * V + 2 * ws.ab * e_vf + ws.bb * e_ff);

  r.x_grid = xs_;
  auto snap = [&](std::string label, double t, Channel c, const Stage& st) {
    r.profiles.push_back({std::move(label), t, c, profile(c, st, m_vv, m_vf, m_ff)});
  };
  // The window can open before the readout time (t_i < 0) in the interaction picture.
  const double t_meas = std::min(0.0, times_.t_i);
  snap("S after measurement", t_meas, S, stage_at(t_meas, true));
  snap("S window start", times_.t_i, S, initial_);
  snap("S window end", times_.t_f, S, final_);
  snap("S window end without interaction", times_.t_f, S, stage_at(times_.t_f, false));
  snap("U window start", times_.t_i, U, initial_);
  snap("U window end", times_.t_f, U, final_);
  r.energy_density_profile = r.profiles[2].values;
  return r;
}

ProtocolResult run_protocol(const ValidatedParams& p, const ModeGrid& grid, FeedbackMode mode,
                            std::size_t n_shots, std::uint64_t seed, const ProtocolOptions& opts) {
  return ProtocolSimulator(p, grid, opts).run(mode, n_shots, seed);
}

double profile_centroid(std::span<const double> xs, std::span<const double> values, double lo,
                        double hi) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < lo || xs[i] > hi) continue;
    num += xs[i] * values[i];
    den += values[i];
  }
  return num / den;
}

NegativeRegion find_negative_region(std::span<const double> xs, std::span<const double> values,
                                    double center, double half_width) {
  NegativeRegion best;
  if (xs.size() < 2) return best;
  const double dx = xs[1] - xs[0];
  std::size_t i = 0;
  while (i < xs.size()) {
    if (values[i] >= 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double integral = 0, vmin = 0;
    while (j < xs.size() && values[j] < 0) {
      integral += values[j] * dx;
      vmin = std::min(vmin, values[j]);
      ++j;
    }
    double lo = xs[i], hi = xs[j - 1];
    bool hits = hi >= center - half_width && lo <= center + half_width;
    if (hits && (!best.found || integral < best.integral)) {
      best = {true, lo, hi, integral, vmin};
    }
    i = j;
  }
  return best;
}

}  // namespace hallqet
