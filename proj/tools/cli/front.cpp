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

#include <sstream>

#include "CLI11.hpp"

#include "cli/cli.hpp"

namespace hallqet::cli {

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw CLI::ValidationError("--values", "not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

void add_param_flags(CLI::App* sub, ParamSource& src) {
  sub->add_option("--params", src.params_file, "parameter file (key = value [unit] per line)");
  sub->add_option("--set", src.overrides, "override KEY=VALUE[UNIT], repeatable")->take_all();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy budget and Gaussian-state oracle for quantum energy teleportation "
               "on quantum Hall edge channels",
               "hallqet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HALLQET_VERSION_STRING);

  ParamSource src;
  std::string out_dir = ".";
  std::string manifest;
  BudgetOptions budget;
  SweepOptions sweep;
  std::string sweep_values;
  SimulateOptions sim;
  std::string feedback = "correlated";
  ConvertOptions conv;
  double current = 0, density = 0;

  auto* v = app.add_subcommand("validate", "resolve and check parameters, print them");
  add_param_flags(v, src);

  auto* b = app.add_subcommand("budget", "closed-form energy budget");
  add_param_flags(b, src);
  b->add_option("--out", out_dir, "output directory");
  b->add_option("--tol", budget.tol, "relative tolerance of the E_B cubature");
  b->add_option("--manifest", manifest, "re-run from a manifest");

  auto* s = app.add_subcommand("sweep", "E_B over a grid of one parameter");
  add_param_flags(s, src);
  s->add_option("--out", out_dir, "output directory");
  s->add_option("--tol", sweep.tol, "relative tolerance of the E_B cubature");
  s->add_option("--key", sweep.key, "parameter to sweep");
  s->add_option("--values", sweep_values, "comma separated grid, e.g. 3,4,5,6");
  s->add_option("--unit", sweep.unit, "unit of the grid values (SI when omitted; l for lengths)");
  s->add_option("--threads", sweep.threads, "worker threads (0: all cores)");
  s->add_option("--manifest", manifest, "re-run from a manifest");

  auto* m = app.add_subcommand("simulate", "sampled shots of the Gaussian-state oracle");
  add_param_flags(m, src);
  m->add_option("--out", out_dir, "output directory");
  m->add_option("--shots", sim.shots, "number of shots")->check(CLI::PositiveNumber);
  m->add_option("--feedback", feedback, "correlated | scrambled | off")
      ->check(CLI::IsMember({"correlated", "scrambled", "off"}));
  m->add_option("--seed", sim.seed, "RNG seed");
  m->add_option("--modes", sim.modes, "modes per channel")->check(CLI::PositiveNumber);
  m->add_option("--coupling-scale", sim.coupling_scale, "multiplier of the inter-channel coupling");
  m->add_option("--tol", sim.tol, "relative tolerance of the reference E_B cubature");
  m->add_option("--manifest", manifest, "re-run from a manifest");

  auto* c = app.add_subcommand("convert", "current <-> energy density of a U-channel pulse");
  add_param_flags(c, src);
  auto* cur = c->add_option("--current", current, "current in A");
  auto* den = c->add_option("--energy-density", density, "energy density in J/m");

  try {
    app.parse(argc, argv);
    if (s->parsed() && !sweep_values.empty()) sweep.values = parse_list(sweep_values);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ParamInput in{src, std::nullopt};
  if (!manifest.empty()) {
    if (!src.params_file.empty() || !src.overrides.empty()) {
      err << "error: --manifest cannot be combined with --params or --set\n";
      return kExitUsage;
    }
    Manifest rec;
    try {
      rec = read_manifest(manifest);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    const std::string want = b->parsed() ? "budget" : s->parsed() ? "sweep" : "simulate";
    if (rec.command != want) {
      err << "error: manifest records '" << rec.command << "', not '" << want << "'\n";
      return kExitUsage;
    }
    return cmd_rerun(manifest, out_dir, out, err);
  }

  if (v->parsed()) return cmd_validate(in, out, err);
  if (b->parsed()) return cmd_budget(in, budget, out_dir, out, err);
  if (s->parsed()) return cmd_sweep(in, sweep, out_dir, out, err);
  if (m->parsed()) {
    parse_feedback(feedback, sim.feedback);
    return cmd_simulate(in, sim, out_dir, out, err);
  }
  if (cur->count()) conv.current = current;
  if (den->count()) conv.energy_density = density;
  return cmd_convert(in, conv, out, err);
}

}  // namespace hallqet::cli
