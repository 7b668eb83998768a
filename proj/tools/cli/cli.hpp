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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/manifest.hpp"
#include "hallqet/oracle.hpp"
#include "hallqet/param_file.hpp"
#include "hallqet/params.hpp"

namespace hallqet::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2 };

// Parameters come from a file plus --set overrides, or from the assignment
// list recorded in a manifest (which then takes precedence).
struct ParamInput {
  ParamSource source;
  std::optional<std::vector<Assignment>> assignments;
};

std::vector<Assignment> input_assignments(const ParamInput& in);
ExperimentParams resolve_input(const ParamInput& in);

struct BudgetOptions {
  double tol = 1e-6;
};

struct SweepOptions {
  std::string key;
  std::vector<double> values;
  std::string unit;  // empty: SI; "l" allowed for lengths
  double tol = 1e-6;
  unsigned threads = 0;
};

struct SimulateOptions {
  std::size_t shots = 1000;
  FeedbackMode feedback = FeedbackMode::kCorrelated;
  std::uint64_t seed = 1;
  int modes = 256;
  double coupling_scale = 0.01;
  double tol = 1e-6;  // for the closed-form E_B reference
  double ramp_fraction = 0.05;
  double step_fraction = 0.01;
};

struct ConvertOptions {
  std::optional<double> current;         // A
  std::optional<double> energy_density;  // J/m
};

// Each command returns an ExitCode. Diagnostics go to err, the human
// readable report to out; files are written to out_dir.
int cmd_validate(const ParamInput& in, std::ostream& out, std::ostream& err);
int cmd_budget(const ParamInput& in, const BudgetOptions& opts,
               const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_sweep(const ParamInput& in, const SweepOptions& opts, const std::filesystem::path& out_dir,
              std::ostream& out, std::ostream& err);
int cmd_simulate(const ParamInput& in, const SimulateOptions& opts,
                 const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_convert(const ParamInput& in, const ConvertOptions& opts, std::ostream& out,
                std::ostream& err);

// Repeats the command recorded in a manifest, writing to out_dir.
int cmd_rerun(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
              std::ostream& out, std::ostream& err);

// Full command line front end.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hallqet::cli
