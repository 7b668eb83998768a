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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hallqet/units.hpp"

namespace hallqet {

// All physical inputs, SI units. Windows: w_A has amplitude 1 and width
// sigma_A centred on 0; lambda_B has amplitude lambda_amp and width sigma_B
// centred on b/2 - L. Region B (and U) is [0, b].
struct ExperimentParams {
  double v_g = 0;            // m/s
  double R = 0;              // Ohm
  double C = 0;              // F
  double l = 0;              // m
  double b = 0;              // m
  double d = 0;              // m
  double L = 0;              // m
  double T_delay_ratio = 0;  // v_g T / L
  double nu_S = 0;
  double nu_U = 0;
  double lambda_amp = 0;
  double eps_r = 0;
  double temperature = 0;  // K
  double eps_uv = 0;       // m
  double omega_c = 0;      // rad/s
  double sigma_A = 0;      // m
  double sigma_B = 0;      // m
  bool allow_short_L = false;

  double eps() const { return eps_r * PhysicalConstants::eps0; }
  double delay_time() const { return T_delay_ratio * L / v_g; }
  double rc() const { return R * C; }

  bool operator==(const ExperimentParams&) const = default;
};

ExperimentParams default_params();

struct ParamKey {
  std::string_view name;
  Dimension dim;
  double ExperimentParams::*member;
  std::string_view description;
};

// Every numeric key, in canonical order. allow_short_L is handled separately.
std::span<const ParamKey> param_keys();
const ParamKey* find_param_key(std::string_view name);

enum class IssueKind { kFastDetectorViolation, kNonPositiveParameter, kRegimeWarning };
enum class Severity { kWarning, kError };

struct ValidationIssue {
  IssueKind kind;
  Severity severity;
  std::string message;
};

std::string_view issue_name(IssueKind kind);

std::vector<ValidationIssue> check_params(const ExperimentParams& p);

class ValidatedParams {
 public:
  const ExperimentParams& get() const { return params_; }
  const ExperimentParams* operator->() const { return &params_; }
  const std::vector<ValidationIssue>& warnings() const { return warnings_; }
  bool has_warning(IssueKind kind) const;

 private:
  friend ValidatedParams validate(const ExperimentParams& p);
  ValidatedParams(ExperimentParams p, std::vector<ValidationIssue> w)
      : params_(p), warnings_(std::move(w)) {}
  ExperimentParams params_;
  std::vector<ValidationIssue> warnings_;
};

// Throws ValidationError listing every error-severity issue. Warnings
// (fast-detector condition, L < 2l) are kept on the returned value.
ValidatedParams validate(const ExperimentParams& p);

// kB T in joules.
double thermal_energy(double temperature);

}  // namespace hallqet
