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

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cli/cli.hpp"
#include "cli/worker_pool.hpp"
#include "hallqet/detector.hpp"
#include "hallqet/energetics.hpp"
#include "hallqet/errors.hpp"
#include "hallqet/mode_grid.hpp"

namespace hallqet::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kRingFactor = 8;
constexpr int kProfileOversampling = 8;

std::string num(double v) { return fmt::format("{:.17g}", v); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::vector<std::string> warning_lines(const ValidatedParams& vp) {
  std::vector<std::string> out;
  for (const ValidationIssue& w : vp.warnings()) {
    out.push_back(std::string(issue_name(w.kind)) + ": " + w.message);
  }
  return out;
}

void print_warnings(const std::vector<std::string>& lines, std::ostream& err) {
  for (const auto& w : lines) fmt::print(err, "warning: {}\n", w);
}

// Maps library exceptions to exit codes.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    for (const auto& p : e.problems()) fmt::print(err, "error: {}\n", p);
    return kExitUsage;
  } catch (const ConvergenceFailure& e) {
    fmt::print(err, "numerical failure: {} (value {:.6g}, error estimate {:.3g})\n", e.what(),
               e.value(), e.error_estimate());
    return kExitNumerical;
  } catch (const StepInstability& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const DegenerateObservable& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumerical;
  }
}

void finish(Manifest m, const fs::path& out_dir, Clock::time_point t0) {
  m.outputs.insert(m.outputs.begin(), kManifestName);
  m.wall_clock_seconds = seconds_since(t0);
  write_json(out_dir / kManifestName, manifest_to_json(m));
}

Manifest start_manifest(const std::string& command, const ParamInput& in,
                        std::vector<Assignment> assignments, const ValidatedParams& vp) {
  Manifest m;
  m.command = command;
  m.source = in.source;
  m.assignments = std::move(assignments);
  m.params = vp.get();
  m.warnings = warning_lines(vp);
  return m;
}

Json eb_options_json(const EBOptions& o) {
  return {{"eb_rel_tol", o.rel_tol},
          {"eb_max_evaluations", o.max_evaluations},
          {"eb_window_cut", o.window_cut},
          {"eb_inner_breakpoint_levels", o.inner_breakpoint_levels},
          {"eb_regulator_check", o.regulator_check}};
}

Json eb_result_json(const EBResult& r) {
  return {{"value_J", r.value},
          {"value_ueV", r.value / units::ueV},
          {"error_estimate_J", r.error_estimate},
          {"value_double_regulator_J", r.value_double_regulator},
          {"regulator_sensitivity", finite_or_null(r.regulator_sensitivity)},
          {"singularity_warning", r.singularity_warning},
          {"converged", r.converged},
          {"outer_evaluations", r.outer_evaluations},
          {"inner_evaluations", r.inner_evaluations},
          {"subdivisions", r.subdivisions},
          {"inner_failures", r.inner_failures},
          {"inner_roundoff_limited", r.inner_roundoff_limited}};
}

// Two-sided 95 % Student t quantiles for 1..30 degrees of freedom.
double t95(std::size_t dof) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof == 0) return std::numeric_limits<double>::infinity();
  if (dof <= 30) return table[dof - 1];
  return 1.960;
}

struct LinearFit {
  bool computable = false;
  double slope = 0, intercept = 0, slope_stderr = 0, intercept_stderr = 0;
};

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const std::size_t n = x.size();
  if (n < 2) return f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return f;
  f.computable = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - f.intercept - f.slope * x[i];
      ss += r * r;
    }
    double s2 = ss / static_cast<double>(n - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

struct BudgetRow {
  std::string name;
  double si;
  std::string si_unit;
  double scale;  // display = si / scale
  std::string display_unit;
  double expected;  // display units, NaN when there is no reference
};

}  // namespace

std::vector<Assignment> input_assignments(const ParamInput& in) {
  if (in.assignments) return *in.assignments;
  std::vector<Assignment> a;
  if (!in.source.params_file.empty()) a = read_param_file(in.source.params_file);
  std::vector<std::string> problems;
  for (const auto& o : in.source.overrides) {
    try {
      a.push_back(parse_override(o));
    } catch (const ValidationError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
  }
  if (!problems.empty()) throw ValidationError(problems);
  return a;
}

ExperimentParams resolve_input(const ParamInput& in) {
  return resolve_params(input_assignments(in));
}

int cmd_validate(const ParamInput& in, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentParams p = resolve_input(in);
    std::vector<ValidationIssue> issues = check_params(p);
    int code = kExitOk;
    for (const auto& i : issues) {
      const char* tag = i.severity == Severity::kError ? "error" : "warning";
      fmt::print(err, "{}: {}: {}\n", tag, issue_name(i.kind), i.message);
      if (i.severity == Severity::kError) code = kExitUsage;
    }
    out << format_param_file(p);
    return code;
  });
}

int cmd_budget(const ParamInput& in, const BudgetOptions& opts, const fs::path& out_dir,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = Clock::now();
    auto assignments = input_assignments(in);
    ValidatedParams vp = validate(resolve_params(assignments));
    Manifest m = start_manifest("budget", in, assignments, vp);
    print_warnings(m.warnings, err);

    EBOptions eo;
    eo.rel_tol = opts.tol;
    EnergyBudget b = energy_budget(vp, eo);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const ExperimentParams& p = vp.get();

    std::vector<BudgetRow> rows = {
        {"delta_v", b.delta_v, "V", units::uV, "uV", 10},
        {"signal_rms", b.signal_rms, "V", units::uV, "uV", 100},
        {"E_A", b.E_A, "J", units::meV, "meV", 1},
        {"E_1", b.E_1, "J", units::meV, "meV", 10},
        {"E_B", b.E_B.value, "J", units::ueV, "ueV", std::abs(p.L - 2 * p.l) <= 1e-9 * p.l ? 100 : nan},
        {"E_B_order_estimate", b.E_B_order_estimate, "J", units::ueV, "ueV", nan},
        {"thermal_energy", b.thermal, "J", units::ueV, "ueV", nan},
        {"detect_current", b.detect_current, "A", units::nA, "nA", nan},
    };

    std::string csv =
        fmt::format("# manifest: {}\n", kManifestName) +
        "quantity,value_si,unit_si,value_display,unit_display,expected_order_display,band_lo,"
        "band_hi,in_band\n";
    Json comparison = Json::array();
    Json quantities = Json::object();
    fmt::print(out, "{:<20} {:>14} {:<5} {:>10} {:>22}\n", "quantity", "value", "unit",
               "expected", "band [x/10, x*10]");
    for (const auto& r : rows) {
      double disp = r.si / r.scale;
      bool has_ref = std::isfinite(r.expected);
      double lo = has_ref ? r.expected / 10 : nan, hi = has_ref ? r.expected * 10 : nan;
      bool in_band = has_ref && disp >= lo && disp <= hi;
      csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.name, num(r.si), r.si_unit, num(disp),
                         r.display_unit, has_ref ? num(r.expected) : "", has_ref ? num(lo) : "",
                         has_ref ? num(hi) : "", has_ref ? (in_band ? "1" : "0") : "");
      quantities[r.name] = {{"value", r.si}, {"unit", r.si_unit}, {"display_value", disp},
                            {"display_unit", r.display_unit}};
      if (has_ref) {
        comparison.push_back({{"quantity", r.name},
                              {"expected_order", r.expected},
                              {"display_unit", r.display_unit},
                              {"band", {lo, hi}},
                              {"in_band", in_band}});
      }
      fmt::print(out, "{:<20} {:>14.6g} {:<5} {:>10} {:>22}\n", r.name, disp, r.display_unit,
                 has_ref ? fmt::format("~{:g}", r.expected) : "-",
                 has_ref ? fmt::format("{} [{:g}, {:g}]", in_band ? "in" : "OUT", lo, hi) : "-");
    }
    fmt::print(out, "E_B error estimate {:.3g} ueV, regulator sensitivity {:.3g}{}\n",
               b.E_B.error_estimate / units::ueV, b.E_B.regulator_sensitivity,
               b.E_B.singularity_warning ? " (above 5 %: singularity warning)" : "");
    if (b.E_B.singularity_warning) {
      fmt::print(err, "warning: E_B changes by {:.1f} % when eps_uv is doubled\n",
                 100 * b.E_B.regulator_sensitivity);
    }

    Json j = Json::object();
    j["manifest"] = kManifestName;
    j["quantities"] = quantities;
    j["G2"] = b.G2;
    j["E_B_detail"] = eb_result_json(b.E_B);
    j["regulator"] = {{"eps_uv_m", b.eps_uv}, {"omega_c_rad_per_s", b.omega_c}};
    j["comparison"] = comparison;
    j["warnings"] = m.warnings;

    fs::create_directories(out_dir);
    write_json(out_dir / "budget.json", j);
    write_text(out_dir / "budget.csv", csv);
    m.options = eb_options_json(eo);
    m.outputs = {"budget.json", "budget.csv"};
    finish(std::move(m), out_dir, t0);
    return kExitOk;
  });
}

int cmd_sweep(const ParamInput& in, const SweepOptions& opts, const fs::path& out_dir,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = Clock::now();
    const ParamKey* key = find_param_key(opts.key);
    std::vector<std::string> problems;
    if (!key) problems.push_back("sweep key '" + opts.key + "' is not a parameter");
    if (opts.values.empty()) problems.push_back("sweep grid is empty");
    bool up = true, down = true;
    for (std::size_t i = 1; i < opts.values.size(); ++i) {
      up = up && opts.values[i] > opts.values[i - 1];
      down = down && opts.values[i] < opts.values[i - 1];
    }
    if (opts.values.size() > 1 && !up && !down) problems.push_back("sweep grid must be strictly monotone");
    if (!problems.empty()) throw ValidationError(problems);

    auto base = input_assignments(in);
    ValidatedParams base_vp = validate(resolve_params(base));
    Manifest m = start_manifest("sweep", in, base, base_vp);
    print_warnings(m.warnings, err);

    const std::size_t n = opts.values.size();
    std::vector<ValidatedParams> points;
    points.reserve(n);
    for (double v : opts.values) {
      auto a = base;
      a.push_back({opts.key, v, opts.unit, "sweep"});
      points.push_back(validate(resolve_params(a)));
    }

    EBOptions eo;
    eo.rel_tol = opts.tol;
    eo.regulator_check = false;
    std::vector<EBResult> eb(n);
    std::vector<double> order(n), x(n);
    parallel_for(n, opts.threads, [&](std::size_t i) {
      eb[i] = compute_EB_detailed(points[i], eo);
      order[i] = eb_order_estimate(points[i]);
    });
    for (std::size_t i = 0; i < n; ++i) x[i] = points[i].get().*key->member;

    const std::string k(key->name);
    const std::string si(si_symbol(key->dim));
    std::string csv = fmt::format("# manifest: {}\n", kManifestName);
    csv += fmt::format("{0}_si,{0}_input,E_B_J,E_B_ueV,error_estimate_J,eb_order_estimate_J,"
                       "eb_order_estimate_ueV,converged\n",
                       k);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = eb[i].value;
      csv += fmt::format("{},{},{},{},{},{},{},{}\n", num(x[i]), num(opts.values[i]),
                         num(eb[i].value), num(eb[i].value / units::ueV),
                         num(eb[i].error_estimate), num(order[i]), num(order[i] / units::ueV),
                         eb[i].converged ? 1 : 0);
      fmt::print(out, "{} = {:.6g} {}  E_B = {:.6g} ueV (+- {:.2g})\n", k, x[i], si,
                 eb[i].value / units::ueV, eb[i].error_estimate / units::ueV);
    }

    ScalingFit ll = fit_log_log(x, y);
    Json jll = {{"computable", ll.computable}, {"points", ll.points}};
    if (ll.computable) {
      double t = ll.points > 2 ? t95(ll.points - 2) : std::numeric_limits<double>::infinity();
      jll["slope"] = ll.slope;
      jll["intercept"] = ll.intercept;
      jll["slope_stderr"] = ll.slope_stderr;
      jll["slope_ci95"] = {finite_or_null(ll.slope - t * ll.slope_stderr),
                           finite_or_null(ll.slope + t * ll.slope_stderr)};
      fmt::print(out, "log-log slope {:.4f} +- {:.4f}\n", ll.slope, ll.slope_stderr);
    } else {
      jll["reason"] = ll.reason;
      fmt::print(out, "log-log slope not computable: {}\n", ll.reason);
    }
    LinearFit lin = fit_linear(x, y);
    Json jlin = {{"computable", lin.computable}, {"points", n}};
    if (lin.computable) {
      jlin["slope_J_per_unit"] = lin.slope;
      jlin["intercept_J"] = lin.intercept;
      jlin["slope_stderr"] = lin.slope_stderr;
      jlin["intercept_stderr"] = lin.intercept_stderr;
    }
    Json fit = {{"manifest", kManifestName},
                {"key", k},
                {"key_unit", si},
                {"log_log", jll},
                {"linear", jlin}};

    fs::create_directories(out_dir);
    write_text(out_dir / "sweep.csv", csv);
    write_json(out_dir / "fit.json", fit);
    m.options = eb_options_json(eo);
    m.options["sweep_key"] = k;
    m.options["sweep_values"] = opts.values;
    m.options["sweep_unit"] = opts.unit;
    m.outputs = {"sweep.csv", "fit.json"};
    finish(std::move(m), out_dir, t0);
    return kExitOk;
  });
}

int cmd_simulate(const ParamInput& in, const SimulateOptions& opts, const fs::path& out_dir,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = Clock::now();
    if (opts.shots == 0) throw ValidationError({"--shots must be positive"});
    if (opts.modes < 1) throw ValidationError({"--modes must be positive"});
    auto assignments = input_assignments(in);
    ValidatedParams vp = validate(resolve_params(assignments));
    Manifest m = start_manifest("simulate", in, assignments, vp);
    print_warnings(m.warnings, err);
    const ExperimentParams& p = vp.get();

    ModeGrid grid = ModeGrid::for_params(p, opts.modes, kRingFactor);
    ProtocolOptions po;
    po.coupling_scale = opts.coupling_scale;
    po.evolution.ramp_fraction = opts.ramp_fraction;
    po.evolution.step_fraction = opts.step_fraction;
    po.profile_oversampling = kProfileOversampling;
    ProtocolSimulator sim(vp, grid, po);
    ProtocolResult r = sim.run(opts.feedback, opts.shots, opts.seed);

    const double ea = compute_EA(vp), e1 = compute_E1(vp);
    EBOptions eo;
    eo.rel_tol = opts.tol;
    eo.regulator_check = false;
    Json eb_ref = nullptr;
    double eb_scaled = std::numeric_limits<double>::quiet_NaN();
    if (p.L >= 2 * p.l || p.allow_short_L) {
      EBResult eb = compute_EB_detailed(vp, eo);
      eb_scaled = opts.coupling_scale * eb.value;
      eb_ref = eb_result_json(eb);
    }

    std::string shots = fmt::format("# manifest: {}\n", kManifestName);
    shots += "shot,outcome_V,outcome_uV,feedback_outcome_V,E_A_J,E_1_J,E_B_J,E_B_ueV,delta_E_S_J\n";
    for (std::size_t i = 0; i < r.shots.size(); ++i) {
      const ShotRecord& s = r.shots[i];
      shots += fmt::format("{},{},{},{},{},{},{},{},{}\n", i, num(s.outcome),
                           num(s.outcome / units::uV), num(s.feedback_outcome), num(s.E_A),
                           num(s.E_1), num(s.E_B), num(s.E_B / units::ueV), num(s.delta_E_S));
    }

    std::string prof = fmt::format("# manifest: {}\n", kManifestName);
    prof += "snapshot,label,channel,time_s,x_m,x_um,energy_density_J_per_m,energy_density_ueV_per_um\n";
    for (std::size_t k = 0; k < r.profiles.size(); ++k) {
      const ProfileSnapshot& s = r.profiles[k];
      const char* ch = s.channel == Channel::kS ? "S" : "U";
      for (std::size_t i = 0; i < r.x_grid.size(); ++i) {
        prof += fmt::format("{},{},{},{},{},{},{},{}\n", k, s.label, ch, num(s.time),
                            num(r.x_grid[i]), num(r.x_grid[i] / units::um), num(s.values[i]),
                            num(s.values[i] / (units::ueV / units::um)));
      }
    }

    // The S energy removed at B travels left with the field.
    const ProtocolTimes& tm = r.times;
    const double center = 0.5 * p.b - p.v_g * (tm.t_f - tm.t_star);
    NegativeRegion neg =
        find_negative_region(r.x_grid, r.energy_density_profile, center, 0.5 * p.b + 4 * p.sigma_B);

    auto stat = [](double mean, double se, double ens) {
      return Json{{"mean_J", mean}, {"stderr_J", se}, {"ensemble_J", ens}};
    };
    auto rel = [](double a, double b) { return b != 0 ? Json((a - b) / b) : Json(nullptr); };
    Json summary = Json::object();
    summary["manifest"] = kManifestName;
    summary["feedback"] = std::string(feedback_name(r.feedback_mode));
    summary["shots"] = r.n_shots;
    summary["seed"] = r.seed;
    summary["n_modes"] = r.n_modes;
    summary["ring_length_m"] = r.ring_length;
    summary["coupling_scale"] = r.coupling_scale;
    summary["times_s"] = {{"T", tm.T}, {"t_star", tm.t_star}, {"t_i", tm.t_i}, {"t_f", tm.t_f}};
    summary["outcome_variance_V2"] = r.outcome_variance;
    summary["oracle"] = {{"E_A", stat(r.E_A_oracle, r.E_A_stderr, r.E_A_ensemble)},
                         {"E_1", stat(r.E_1_oracle, r.E_1_stderr, r.E_1_ensemble)},
                         {"E_B", stat(r.E_B_oracle, r.E_B_stderr, r.E_B_ensemble)},
                         {"delta_E_S", stat(r.delta_E_S, r.delta_E_S_stderr, r.delta_E_S_ensemble)}};
    summary["E_B_significance"] =
        r.E_B_stderr > 0 ? Json(r.E_B_oracle / r.E_B_stderr) : Json(nullptr);
    summary["closed_form"] = {{"E_A_J", ea},
                              {"E_1_J", e1},
                              {"E_B_scaled_J", finite_or_null(eb_scaled)},
                              {"E_B_detail", eb_ref}};
    summary["relative_mismatch"] = {
        {"E_A", rel(r.E_A_oracle, ea)},
        {"E_1", rel(r.E_1_oracle, e1)},
        {"E_B", std::isfinite(eb_scaled) ? rel(r.E_B_oracle, eb_scaled) : Json(nullptr)}};
    summary["negative_region"] = {{"found", neg.found},
                                  {"lo_m", neg.lo},
                                  {"hi_m", neg.hi},
                                  {"integral_J", neg.integral},
                                  {"min_J_per_m", neg.min_value}};
    summary["diagnostics"] = {{"symplectic_defect", r.symplectic_defect},
                              {"evolution_steps", r.evolution_steps}};

    fmt::print(out, "feedback {}  shots {}  modes {}  coupling {:g}\n", feedback_name(r.feedback_mode),
               r.n_shots, r.n_modes, r.coupling_scale);
    fmt::print(out, "E_A  oracle {:.6g} meV (+- {:.2g})  closed form {:.6g} meV\n",
               r.E_A_oracle / units::meV, r.E_A_stderr / units::meV, ea / units::meV);
    fmt::print(out, "E_1  oracle {:.6g} meV (+- {:.2g})  closed form {:.6g} meV\n",
               r.E_1_oracle / units::meV, r.E_1_stderr / units::meV, e1 / units::meV);
    fmt::print(out, "E_B  oracle {:.6g} ueV (+- {:.2g})  closed form x coupling {:.6g} ueV\n",
               r.E_B_oracle / units::ueV, r.E_B_stderr / units::ueV, eb_scaled / units::ueV);

    fs::create_directories(out_dir);
    write_text(out_dir / "shots.csv", shots);
    write_text(out_dir / "profile.csv", prof);
    write_json(out_dir / "summary.json", summary);
    m.options = eb_options_json(eo);
    m.options["shots"] = opts.shots;
    m.options["feedback"] = std::string(feedback_name(opts.feedback));
    m.options["seed"] = opts.seed;
    m.options["n_modes"] = opts.modes;
    m.options["coupling_scale"] = opts.coupling_scale;
    m.options["ramp_fraction"] = opts.ramp_fraction;
    m.options["step_fraction"] = opts.step_fraction;
    m.options["ring_factor"] = kRingFactor;
    m.options["ring_length_m"] = grid.ring_length;
    m.options["profile_oversampling"] = kProfileOversampling;
    m.outputs = {"shots.csv", "profile.csv", "summary.json"};
    finish(std::move(m), out_dir, t0);
    return kExitOk;
  });
}

int cmd_convert(const ParamInput& in, const ConvertOptions& opts, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    if (opts.current.has_value() == opts.energy_density.has_value()) {
      throw ValidationError({"convert takes exactly one of --current and --energy-density"});
    }
    ExperimentParams p = validate(resolve_input(in)).get();
    const double eps_unit = units::ueV / units::um;
    if (opts.current) {
      double j = *opts.current;
      if (j < 0) throw ValidationError({"--current must be non-negative"});
      double e = current_to_energy_density(j, p);
      double back = energy_density_to_current(e, p);
      fmt::print(out, "current {:.6g} A -> energy density {:.6g} J/m ({:.6g} ueV/um)\n", j, e,
                 e / eps_unit);
      fmt::print(out, "round trip: {:.6g} A (relative error {:.2g})\n", back,
                 j != 0 ? std::abs(back - j) / j : std::abs(back));
    } else {
      double e = *opts.energy_density;
      if (e < 0) throw ValidationError({"--energy-density must be non-negative"});
      double j = energy_density_to_current(e, p);
      double back = current_to_energy_density(j, p);
      fmt::print(out, "energy density {:.6g} J/m ({:.6g} ueV/um) -> current {:.6g} A ({:.6g} nA)\n",
                 e, e / eps_unit, j, j / units::nA);
      fmt::print(out, "round trip: {:.6g} J/m (relative error {:.2g})\n", back,
                 e != 0 ? std::abs(back - e) / e : std::abs(back));
    }
    return kExitOk;
  });
}

int cmd_rerun(const fs::path& manifest, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
  Manifest m;
  int code = guarded(err, [&] {
    m = read_manifest(manifest);
    return kExitOk;
  });
  if (code != kExitOk) return code;
  ParamInput in{m.source, m.assignments};
  const Json& o = m.options;
  try {
    if (m.command == "budget") {
      BudgetOptions b;
      b.tol = o.at("eb_rel_tol").get<double>();
      return cmd_budget(in, b, out_dir, out, err);
    }
    if (m.command == "sweep") {
      SweepOptions s;
      s.key = o.at("sweep_key").get<std::string>();
      s.values = o.at("sweep_values").get<std::vector<double>>();
      s.unit = o.at("sweep_unit").get<std::string>();
      s.tol = o.at("eb_rel_tol").get<double>();
      return cmd_sweep(in, s, out_dir, out, err);
    }
    if (m.command == "simulate") {
      SimulateOptions s;
      s.shots = o.at("shots").get<std::size_t>();
      if (!parse_feedback(o.at("feedback").get<std::string>(), s.feedback)) {
        throw ValidationError({"manifest: unknown feedback mode"});
      }
      s.seed = o.at("seed").get<std::uint64_t>();
      s.modes = o.at("n_modes").get<int>();
      s.coupling_scale = o.at("coupling_scale").get<double>();
      s.ramp_fraction = o.at("ramp_fraction").get<double>();
      s.step_fraction = o.at("step_fraction").get<double>();
      s.tol = o.at("eb_rel_tol").get<double>();
      return cmd_simulate(in, s, out_dir, out, err);
    }
  } catch (const nlohmann::json::exception& e) {
    fmt::print(err, "error: manifest options: {}\n", e.what());
    return kExitUsage;
  } catch (const ValidationError& e) {
    for (const auto& p : e.problems()) fmt::print(err, "error: {}\n", p);
    return kExitUsage;
  }
  fmt::print(err, "error: manifest command '{}' cannot be re-run\n", m.command);
  return kExitUsage;
}

}  // namespace hallqet::cli
