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

#include "hallqet/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hallqet/chiral_field.hpp"
#include "hallqet/detector.hpp"
#include "hallqet/errors.hpp"
#include "hallqet/quadrature.hpp"

namespace hallqet {

namespace {

constexpr double kE = PhysicalConstants::e_charge;
constexpr double kHbar = PhysicalConstants::hbar;

struct EBIntegral {
  double value = 0;
  double error = 0;
  std::size_t outer = 0;
  std::size_t inner = 0;
  std::size_t subdivisions = 0;
  std::size_t inner_failures = 0;
  std::size_t inner_roundoff = 0;
  bool converged = false;
};

// integral dx_B dy_B dybar f(x_B, y_B) lambda_B(ybar - L)
//   * integral dxbar w_A(xbar) Re[(x_B + y_B - xbar - ybar + L + v_g T + i eps)^-5]
EBIntegral eb_integral(const ExperimentParams& p, double eps, const EBOptions& opts) {
  const WindowProfile wA = window_A(p);
  const WindowProfile wB = window_B(p);
  const double shift = p.L + p.T_delay_ratio * p.L;
  const double cut = opts.window_cut;

  // Typical size of the inner integral when the pole sits a distance
  // L + v_g T away from the w_A window.
  const double scale = std::sqrt(2 * kPi) * wA.sigma / std::pow(std::max(shift, wA.sigma), 5);
  const double inner_abs = 1e-2 * opts.rel_tol * scale;

  std::size_t inner_evals = 0;
  std::size_t inner_failures = 0;
  std::size_t inner_roundoff = 0;
  const double lo = wA.center - cut * wA.sigma;
  const double hi = wA.center + cut * wA.sigma;
  IntegrationSpec inner;
  inner.rel_tol = 1e-2 * opts.rel_tol;
  inner.abs_tol = 0.5 * inner_abs;
  inner.max_subdivisions = 2000;
  inner.throw_on_failure = false;
  inner.breakpoints.reserve(2 * opts.inner_breakpoint_levels + 1);

  auto run = [&](const Integrand1D& f, double a, double b, double pole) {
    // Geometric partition around the eps-wide peak so it is resolved from
    // the first pass.
    inner.bounds = {{a, b}};
    inner.breakpoints.clear();
    inner.breakpoints.push_back(pole);
    double step = eps;
    for (int k = 0; k < opts.inner_breakpoint_levels && step < 4 * wA.sigma; ++k) {
      inner.breakpoints.push_back(pole - step);
      inner.breakpoints.push_back(pole + step);
      step *= 4;
    }
    QuadResult r = integrate_1d(f, inner);
    inner_evals += r.evaluations;
    if (!r.converged) {
      if (r.roundoff_limited) {
        ++inner_roundoff;
      } else {
        ++inner_failures;
      }
    }
    return r.value;
  };

  auto inner_value = [&](double c) {
    // The kernel is odd about the pole at xbar = c, so the symmetric part of
    // the range is folded onto [0, S]; this removes the leading cancellation.
    if (c <= lo || c >= hi) {
      auto f = [&](double xbar) { return wA(xbar) * regularized_power_kernel(c - xbar, 5, eps); };
      return run(f, lo, hi, c);
    }
    const double span = std::min(c - lo, hi - c);
    auto folded = [&](double s) {
      return (wA(c - s) - wA(c + s)) * regularized_power_kernel(s, 5, eps);
    };
    double value = run(folded, 0.0, span, 0.0);
    auto f = [&](double xbar) { return wA(xbar) * regularized_power_kernel(c - xbar, 5, eps); };
    if (c - lo > span) {
      value += run(f, lo, c - span, c);
    } else if (hi - c > span) {
      value += run(f, c + span, hi, c);
    }
    return value;
  };

  auto outer_f = [&](std::span<const double> v) {
    double xB = v[0], yB = v[1], ybar = v[2];
    double dx = xB - yB;
    double coulomb = 1.0 / std::sqrt(dx * dx + p.d * p.d);
    double lam = wB(ybar - p.L);
    if (lam == 0) return 0.0;
    return coulomb * lam * inner_value(xB + yB - ybar + shift);
  };

  EBIntegral out;
  if (p.lambda_amp == 0) {
    out.converged = true;
    return out;
  }
  IntegrationSpec spec;
  double ybar_c = wB.center + p.L;
  spec.bounds = {{0.0, p.b}, {0.0, p.b}, {ybar_c - cut * wB.sigma, ybar_c + cut * wB.sigma}};
  spec.rel_tol = opts.rel_tol;
  spec.max_subdivisions = std::numeric_limits<std::size_t>::max();
  spec.max_evaluations = opts.max_evaluations;
  spec.throw_on_failure = false;
  QuadResult r = integrate_nd(outer_f, spec);
  out.value = r.value;
  out.error = r.error_estimate;
  out.outer = r.evaluations;
  out.inner = inner_evals;
  out.subdivisions = r.subdivisions_used;
  out.inner_failures = inner_failures;
  out.inner_roundoff = inner_roundoff;
  out.converged = r.converged && inner_failures == 0;
  return out;
}

}  // namespace

double compute_EA(const ValidatedParams& vp) {
  const auto& p = vp.get();
  double g = measurement_coupling(p);
  return kHbar * p.v_g * p.nu_S / (4 * kPi) * g * g * window_derivative_l2(window_A(p), 2);
}

double vacuum_G2(const ValidatedParams& vp) {
  const auto& p = vp.get();
  CorrelatorKernel kernel{p.nu_S, p.eps_uv};
  return quad_form_vacuum(kernel, WindowDerivative{window_A(p), 1, measurement_coupling(p)});
}

double compute_E1(const ValidatedParams& vp) {
  const auto& p = vp.get();
  double lam_norm = window_derivative_l2(window_B(p), 1);
  return kPi * kHbar * p.v_g / p.nu_U * lam_norm * (vacuum_G2(vp) + 0.25);
}

double eb_prefactor(const ExperimentParams& p) {
  double dv = delta_v(rc_detector(p));
  return 3 * kE * kE * kE * p.v_g * p.R * p.nu_S / (4 * kPi * kPi * kPi * p.eps() * dv);
}

EBResult compute_EB_detailed(const ValidatedParams& vp, const EBOptions& opts) {
  const auto& p = vp.get();
  if (p.L < 2 * p.l && !p.allow_short_L) {
    throw ValidationError({"RegimeWarning: E_B needs L >= 2l (L = " + std::to_string(p.L) +
                           " m); set allow_short_L = 1 to override"});
  }
  // The first-order energy change of U is minus the prefactor times the
  // integral: with Re[(u + i eps)^-5] ~ u^-5 > 0 at large separation the
  // gain is positive for narrow windows.
  const double pref = -eb_prefactor(p);
  EBResult res;
  EBIntegral main = eb_integral(p, p.eps_uv, opts);
  res.value = main.value == 0 ? 0.0 : pref * main.value;
  res.error_estimate = std::abs(pref) * main.error;
  res.outer_evaluations = main.outer;
  res.inner_evaluations = main.inner;
  res.subdivisions = main.subdivisions;
  res.inner_failures = main.inner_failures;
  res.inner_roundoff_limited = main.inner_roundoff;
  res.converged = main.converged;
  if (!res.converged && opts.throw_on_failure) {
    throw ConvergenceFailure("E_B cubature did not reach rel_tol " + std::to_string(opts.rel_tol) +
                                 " within " + std::to_string(opts.max_evaluations) +
                                 " evaluations (" + std::to_string(main.inner_failures) +
                                 " inner failures)",
                             res.value, res.error_estimate);
  }
  if (opts.regulator_check && p.lambda_amp != 0) {
    EBIntegral wide = eb_integral(p, 2 * p.eps_uv, opts);
    res.value_double_regulator = pref * wide.value;
    res.regulator_sensitivity =
        std::abs(res.value - res.value_double_regulator) / std::abs(res.value);
    res.singularity_warning = res.regulator_sensitivity > 0.05;
  } else {
    res.value_double_regulator = res.value;
  }
  return res;
}

double compute_EB(const ValidatedParams& p) { return compute_EB_detailed(p).value; }

double eb_order_estimate(const ValidatedParams& vp) {
  const auto& p = vp.get();
  double dv = delta_v(rc_detector(p));
  return kE * kE * p.lambda_amp / (4 * kPi * p.eps() * p.l) * (kE * p.v_g * p.R / (p.l * dv)) *
         std::pow(p.l / p.L, 5);
}

ScalingFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  ScalingFit fit;
  fit.points = x.size();
  if (x.size() != y.size()) {
    fit.reason = "x and y have different lengths";
    return fit;
  }
  if (x.size() < 2) {
    fit.reason = "need at least 2 points, got " + std::to_string(x.size());
    return fit;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) {
      std::ostringstream os;
      os << "non-positive value at point " << i << " (x = " << x[i] << ", y = " << y[i]
         << "); log-log slope undefined";
      fit.reason = os.str();
      return fit;
    }
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0) {
    fit.reason = "x values are not distinct";
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
      ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (n - 2) / sxx);
  }
  fit.computable = true;
  return fit;
}

ScalingRun fit_scaling_exponent(const ValidatedParams& vp, std::span<const double> L_values,
                                const EBOptions& opts) {
  std::vector<double> sorted(L_values.begin(), L_values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 4) {
    throw ValidationError({"scaling fit needs at least 4 distinct L values"});
  }
  ScalingRun run;
  std::vector<double> values;
  for (double L : L_values) {
    if (L < 2 * vp->l) {
      throw ValidationError({"scaling fit needs L >= 2l, got L = " + std::to_string(L)});
    }
    ExperimentParams q = vp.get();
    q.L = L;
    EBResult r = compute_EB_detailed(validate(q), opts);
    run.L_values.push_back(L);
    run.eb.push_back(r);
    values.push_back(r.value);
  }
  run.fit = fit_log_log(run.L_values, values);
  return run;
}

double current_to_energy_density(double current, const ExperimentParams& p) {
  return kPi * kHbar * current * current / (p.nu_U * kE * kE * p.v_g);
}

double energy_density_to_current(double energy_density, const ExperimentParams& p) {
  return std::sqrt(energy_density * p.nu_U * kE * kE * p.v_g / (kPi * kHbar));
}

EnergyBudget energy_budget(const ValidatedParams& vp, const EBOptions& opts) {
  const auto& p = vp.get();
  EnergyBudget b;
  b.delta_v = delta_v(rc_detector(p));
  b.signal_rms = signal_rms(p, window_A(p));
  b.E_A = compute_EA(vp);
  b.G2 = vacuum_G2(vp);
  b.E_1 = compute_E1(vp);
  b.E_B = compute_EB_detailed(vp, opts);
  b.E_B_order_estimate = eb_order_estimate(vp);
  b.thermal = thermal_energy(p.temperature);
  b.detect_current = energy_density_to_current(std::max(b.E_B.value, 0.0) / p.b, p);
  b.eps_uv = p.eps_uv;
  b.omega_c = p.omega_c;
  b.eb_rel_tol = opts.rel_tol;
  return b;
}

}  // namespace hallqet
