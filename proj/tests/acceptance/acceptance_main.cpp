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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 255).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "cli/cli.hpp"
#include "hallqet/chiral_field.hpp"
#include "hallqet/detector.hpp"
#include "hallqet/energetics.hpp"
#include "hallqet/errors.hpp"
#include "hallqet/mode_grid.hpp"
#include "hallqet/oracle.hpp"
#include "hallqet/quadrature.hpp"

namespace {

using namespace hallqet;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kDeltaVLo = 3, kDeltaVHi = 30;          // uV
constexpr double kRmsLo = 30, kRmsHi = 300;              // uV
constexpr double kEALo = 0.1, kEAHi = 10;                // meV
constexpr double kEAQuadRel = 1e-8;
constexpr double kE1Lo = 1, kE1Hi = 100;                 // meV
constexpr double kEB2Lo = 10, kEB2Hi = 1000;             // ueV at L = 2l
constexpr double kEB4Lo = 0.1, kEB4Hi = 10;              // ueV at L = 4l
constexpr double kSlope = -5, kSlopeTol = 0.3;
constexpr double kRegulatorTol = 0.05;
constexpr double kTolTightTol = 0.01;
constexpr double kOracleClosedTol = 0.05;
constexpr double kPerturbativeTol = 0.15;
constexpr double kScrambledSigmas = 2;
constexpr double kCorrelatedSigmas = 5;
constexpr double kNegativeRegionTol = 0.20;
constexpr double kVelocityTol = 0.01;
constexpr double kDriftTol = 1e-6;
constexpr double kThermalFactor = 10;

constexpr int kModes = 256;
constexpr std::size_t kShots = 10000;
constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("{} {:>2} {}: {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, s);
  std::fflush(stdout);
}

ExperimentParams with_L(double L_over_l) {
  ExperimentParams p = default_params();
  p.L = L_over_l * p.l;
  return p;
}

double eb(const ExperimentParams& p, double rel_tol = 1e-6) {
  EBOptions o;
  o.rel_tol = rel_tol;
  o.regulator_check = false;
  return compute_EB_detailed(validate(p), o).value;
}

struct OracleRuns {
  std::unique_ptr<ProtocolSimulator> sim;
  ProtocolResult correlated, scrambled, off;
};

OracleRuns oracle_runs(double coupling) {
  ExperimentParams p = default_params();
  ProtocolOptions po;
  po.coupling_scale = coupling;
  OracleRuns r;
  r.sim = std::make_unique<ProtocolSimulator>(validate(p), ModeGrid::for_params(p, kModes), po);
  r.correlated = r.sim->run(FeedbackMode::kCorrelated, kShots, kSeed);
  r.scrambled = r.sim->run(FeedbackMode::kScrambled, kShots, kSeed);
  r.off = r.sim->run(FeedbackMode::kOff, kShots, kSeed);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Manifests differ only in the recorded wall-clock time.
std::string strip_wall_clock(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("\"wall_clock_seconds\"") == std::string::npos) out += line + "\n";
  }
  return out;
}

// Compares every file of two output directories.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t nb = std::distance(fs::directory_iterator(b), fs::directory_iterator{});
  if (names.size() != nb) {
    why = "different file sets";
    return false;
  }
  for (const auto& n : names) {
    std::string x = slurp(a / n), y = slurp(b / n);
    if (n == cli::kManifestName) {
      x = strip_wall_clock(x);
      y = strip_wall_clock(y);
    }
    if (x != y) {
      why = n + " differs";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  const ExperimentParams p0 = default_params();
  const ValidatedParams v0 = validate(p0);
  fmt::print("acceptance: n_modes {}, shots {}, seed {}\n", kModes, kShots, kSeed);

  report(1, "delta_v band", [&] {
    double dv = delta_v(rc_detector(p0)) / units::uV;
    return Outcome{dv >= kDeltaVLo && dv <= kDeltaVHi,
                   fmt::format("{:.4g} uV, band [{}, {}] uV", dv, kDeltaVLo, kDeltaVHi)};
  });

  report(2, "signal RMS band", [&] {
    double rms = signal_rms(p0, window_A(p0)) / units::uV;
    return Outcome{rms >= kRmsLo && rms <= kRmsHi,
                   fmt::format("{:.4g} uV, band [{}, {}] uV", rms, kRmsLo, kRmsHi)};
  });

  report(3, "E_A band and quadrature check", [&] {
    double ea = compute_EA(v0) / units::meV;
    WindowProfile w = window_A(p0);
    IntegrationSpec spec;
    spec.bounds = {{-40 * w.sigma, 40 * w.sigma}};
    spec.rel_tol = 1e-12;
    spec.breakpoints = {-3 * w.sigma, -w.sigma, 0.0, w.sigma, 3 * w.sigma};
    double quad = integrate_1d(
                      [&](double x) {
                        double d2 = w.derivative(x, 2);
                        return d2 * d2;
                      },
                      spec)
                      .value;
    double g = measurement_coupling(p0);
    double ea_quad = PhysicalConstants::hbar * p0.v_g * p0.nu_S / (4 * kPi) * g * g * quad /
                     units::meV;
    double rel = std::abs(ea_quad - ea) / ea;
    return Outcome{ea >= kEALo && ea <= kEAHi && rel < kEAQuadRel,
                   fmt::format("{:.5g} meV, band [{}, {}] meV; quadrature rel diff {:.2g} (< {:g})",
                               ea, kEALo, kEAHi, rel, kEAQuadRel)};
  });

  report(4, "E_1 band", [&] {
    double e1 = compute_E1(v0) / units::meV;
    return Outcome{e1 >= kE1Lo && e1 <= kE1Hi,
                   fmt::format("{:.4g} meV, band [{}, {}] meV", e1, kE1Lo, kE1Hi)};
  });

  double eb2 = 0;
  report(5, "E_B bands at L = 2l and 4l", [&] {
    eb2 = eb(with_L(2));
    double a = eb2 / units::ueV, b = eb(with_L(4)) / units::ueV;
    bool ok = a >= kEB2Lo && a <= kEB2Hi && b >= kEB4Lo && b <= kEB4Hi && a > 0 && b > 0;
    return Outcome{ok, fmt::format("L=2l: {:.5g} ueV in [{}, {}]; L=4l: {:.5g} ueV in [{}, {}]",
                                   a, kEB2Lo, kEB2Hi, b, kEB4Lo, kEB4Hi)};
  });

  report(6, "E_B scaling exponent over L in {3,4,5,6} l", [&] {
    std::vector<double> Ls;
    for (double k : {3.0, 4.0, 5.0, 6.0}) Ls.push_back(k * p0.l);
    EBOptions o;
    o.regulator_check = false;
    ScalingRun run = fit_scaling_exponent(v0, Ls, o);
    std::string vals;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
      vals += fmt::format("{}{:.4g}", i ? ", " : "", run.eb[i].value / units::ueV);
    }
    if (!run.fit.computable) {
      return Outcome{false, fmt::format("E_B = [{}] ueV; slope not computable: {}", vals,
                                        run.fit.reason)};
    }
    bool ok = std::abs(run.fit.slope - kSlope) <= kSlopeTol;
    return Outcome{ok, fmt::format("E_B = [{}] ueV; slope {:.3f}, required {} +- {}", vals,
                                   run.fit.slope, kSlope, kSlopeTol)};
  });

  report(7, "regulator and tolerance stability at L = 2l", [&] {
    if (eb2 == 0) eb2 = eb(with_L(2));
    ExperimentParams half = with_L(2);
    half.eps_uv *= 0.5;
    double e_half = eb(half);
    double e_tight = eb(with_L(2), 1e-7);
    double d1 = std::abs(e_half - eb2) / std::abs(eb2);
    double d2 = std::abs(e_tight - eb2) / std::abs(eb2);
    return Outcome{d1 < kRegulatorTol && d2 < kTolTightTol,
                   fmt::format("eps_uv/2: {:.3g} (< {}); tol/10: {:.3g} (< {})", d1,
                               kRegulatorTol, d2, kTolTightTol)};
  });

  fmt::print("building oracle runs (coupling 0.01, 0.02, 0.04, 0)\n");
  std::fflush(stdout);
  OracleRuns r01 = oracle_runs(0.01);

  report(8, "oracle vs closed form: E_A and E_1", [&] {
    double ea = compute_EA(v0), e1 = compute_E1(v0);
    double da = std::abs(r01.correlated.E_A_oracle - ea) / ea;
    double d1 = std::abs(r01.correlated.E_1_oracle - e1) / e1;
    return Outcome{da < kOracleClosedTol && d1 < kOracleClosedTol,
                   fmt::format("E_A {:.5g} vs {:.5g} meV (rel {:.3g}); E_1 {:.5g} vs {:.5g} meV "
                               "(rel {:.3g}); tol {}",
                               r01.correlated.E_A_oracle / units::meV, ea / units::meV, da,
                               r01.correlated.E_1_oracle / units::meV, e1 / units::meV, d1,
                               kOracleClosedTol)};
  });

  OracleRuns r02 = oracle_runs(0.02);
  OracleRuns r04 = oracle_runs(0.04);

  report(9, "perturbative consistency", [&] {
    if (eb2 == 0) eb2 = eb(with_L(2));
    auto mismatch = [&](const OracleRuns& r, double c) {
      return std::abs(r.correlated.E_B_oracle / (c * eb2) - 1);
    };
    double m4 = mismatch(r04, 0.04), m2 = mismatch(r02, 0.02), m1 = mismatch(r01, 0.01);
    bool ok = m1 < kPerturbativeTol && m1 < m2 && m2 < m4;
    return Outcome{ok, fmt::format("mismatch at 0.04/0.02/0.01: {:.3g}/{:.3g}/{:.3g}; "
                                   "need < {} at 0.01 and decreasing",
                                   m4, m2, m1, kPerturbativeTol)};
  });

  report(10, "passivity: scrambled vs correlated feedback", [&] {
    const auto& s = r01.scrambled;
    const auto& c = r01.correlated;
    bool ok = s.E_B_oracle <= kScrambledSigmas * s.E_B_stderr &&
              c.E_B_oracle > kCorrelatedSigmas * c.E_B_stderr;
    return Outcome{ok, fmt::format("scrambled {:.4g} +- {:.2g} ueV; correlated {:.4g} +- {:.2g} "
                                   "ueV ({:.1f} sigma)",
                                   s.E_B_oracle / units::ueV, s.E_B_stderr / units::ueV,
                                   c.E_B_oracle / units::ueV, c.E_B_stderr / units::ueV,
                                   c.E_B_oracle / c.E_B_stderr)};
  });

  report(11, "negative energy density near B", [&] {
    const auto& c = r01.correlated;
    const ProtocolTimes& t = c.times;
    double center = 0.5 * p0.b - p0.v_g * (t.t_f - t.t_star);
    NegativeRegion neg = find_negative_region(c.x_grid, c.energy_density_profile, center,
                                              0.5 * p0.b + 4 * p0.sigma_B);
    if (!neg.found) {
      auto lo = std::min_element(c.energy_density_profile.begin(), c.energy_density_profile.end());
      return Outcome{false, fmt::format("no negative region within {:.3g} um of x = {:.3g} um "
                                        "(profile minimum {:.3g} ueV/um); E_B oracle {:.4g} ueV",
                                        (0.5 * p0.b + 4 * p0.sigma_B) / units::um,
                                        center / units::um, *lo / (units::ueV / units::um),
                                        c.E_B_oracle / units::ueV)};
    }
    double rel = std::abs(neg.integral / -c.E_B_oracle - 1);
    return Outcome{rel < kNegativeRegionTol,
                   fmt::format("integral {:.4g} ueV vs -E_B {:.4g} ueV (rel {:.3g}, tol {})",
                               neg.integral / units::ueV, -c.E_B_oracle / units::ueV, rel,
                               kNegativeRegionTol)};
  });

  report(12, "chirality: lump velocities", [&] {
    const ProtocolSimulator& sim = *r01.sim;
    const ProtocolTimes& t = sim.times();
    const double V = sim.conditioning().predictive_variance;
    const double t1 = t.t_f + 2 * p0.l / p0.v_g, t2 = t1 + 4 * p0.l / p0.v_g;
    const auto& xs = sim.x_grid();
    auto ea_centroid = [&](double tt) {
      auto prof = sim.profile_at(Channel::kS, tt, V, V, V);
      double c = -p0.v_g * tt;
      return profile_centroid(xs, prof, c - 5 * p0.sigma_A, c + 5 * p0.sigma_A);
    };
    auto eb_centroid = [&](double tt) {
      auto on = sim.profile_at(Channel::kS, tt, V, V, V, true);
      auto free = sim.profile_at(Channel::kS, tt, V, V, V, false);
      for (std::size_t i = 0; i < on.size(); ++i) on[i] -= free[i];
      double c = 0.5 * p0.b - p0.v_g * (tt - t.t_star);
      double hw = 0.5 * p0.b + 5 * p0.sigma_B;
      return profile_centroid(xs, on, c - hw, c + hw);
    };
    double va = (ea_centroid(t2) - ea_centroid(t1)) / (t2 - t1);
    double vb = (eb_centroid(t2) - eb_centroid(t1)) / (t2 - t1);
    double da = std::abs(va / -p0.v_g - 1), db = std::abs(vb / -p0.v_g - 1);
    return Outcome{da < kVelocityTol && db < kVelocityTol,
                   fmt::format("E_A lump {:.6g} m/s, E_B lump {:.6g} m/s, expected {:.6g} m/s "
                               "(rel {:.2g}, {:.2g}; tol {})",
                               va, vb, -p0.v_g, da, db, kVelocityTol)};
  });

  report(13, "energy conservation and E_A >= E_B", [&] {
    OracleRuns free = oracle_runs(0.0);
    const auto& f = free.correlated;
    double total = f.E_A_ensemble + f.E_1_ensemble;
    double drift = std::abs(f.delta_E_S_ensemble + f.E_B_ensemble) / total;
    double worst_shot = 0;
    for (const auto& s : f.shots) {
      worst_shot = std::max(worst_shot, std::abs(s.delta_E_S + s.E_B) / (s.E_A + s.E_1));
    }
    bool order = true;
    std::string margins;
    for (const OracleRuns* r : {&r04, &r02, &r01}) {
      for (const ProtocolResult* x : {&r->correlated, &r->scrambled, &r->off}) {
        order = order && x->E_A_oracle - x->E_B_oracle >= 0;
      }
    }
    bool ok = drift < kDriftTol && worst_shot < kDriftTol && order;
    return Outcome{ok, fmt::format("free drift {:.2g} (worst shot {:.2g}, tol {}); E_A - E_B >= 0 "
                                   "in all 9 runs: {}",
                                   drift, worst_shot, kDriftTol, order ? "yes" : "no")};
  });

  report(14, "thermal margin", [&] {
    if (eb2 == 0) eb2 = eb(with_L(2));
    double th = thermal_energy(0.01);
    return Outcome{eb2 > kThermalFactor * th,
                   fmt::format("E_B {:.4g} ueV vs {} x kT(10 mK) = {:.4g} ueV",
                               eb2 / units::ueV, kThermalFactor, kThermalFactor * th / units::ueV)};
  });

  report(15, "determinism from manifests", [&] {
    fs::path root = fs::temp_directory_path() / fmt::format("hallqet_acceptance_{}", ::getpid());
    fs::remove_all(root);
    std::ostringstream out, err;
    cli::ParamInput in;
    in.source.overrides = {"L=2 l"};
    cli::SimulateOptions so;
    so.shots = 500;
    so.modes = 48;
    so.seed = kSeed;
    so.tol = 1e-4;
    cli::SweepOptions sw;
    sw.key = "lambda_amp";
    sw.values = {5, 10};
    sw.tol = 1e-4;
    cli::BudgetOptions bo;
    bo.tol = 1e-4;
    std::vector<int> codes = {
        cli::cmd_simulate(in, so, root / "sim_a", out, err),
        cli::cmd_simulate(in, so, root / "sim_b", out, err),
        cli::cmd_rerun(root / "sim_a" / cli::kManifestName, root / "sim_c", out, err),
        cli::cmd_sweep(in, sw, root / "sweep_a", out, err),
        cli::cmd_rerun(root / "sweep_a" / cli::kManifestName, root / "sweep_b", out, err),
        cli::cmd_budget(in, bo, root / "budget_a", out, err),
        cli::cmd_rerun(root / "budget_a" / cli::kManifestName, root / "budget_b", out, err)};
    for (int c : codes) {
      if (c != 0) return Outcome{false, "command failed: " + err.str()};
    }
    std::string why;
    bool ok = same_outputs(root / "sim_a", root / "sim_b", why) &&
              same_outputs(root / "sim_a", root / "sim_c", why) &&
              same_outputs(root / "sweep_a", root / "sweep_b", why) &&
              same_outputs(root / "budget_a", root / "budget_b", why);
    fs::remove_all(root);
    return Outcome{ok, ok ? "simulate, sweep and budget outputs byte-identical on re-run "
                            "(manifests compared without wall-clock time)"
                          : why};
  });

  fmt::print("{} of 15 criteria failed\n", failures);
  return std::min(failures, 255);
}
