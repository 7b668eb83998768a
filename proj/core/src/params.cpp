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

#include "hallqet/params.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "hallqet/errors.hpp"

namespace hallqet {

namespace {

using P = ExperimentParams;

constexpr std::array kKeys = {
    ParamKey{"v_g", Dimension::kVelocity, &P::v_g, "edge magnetoplasmon group velocity"},
    ParamKey{"R", Dimension::kResistance, &P::R, "detector resistance"},
    ParamKey{"C", Dimension::kCapacitance, &P::C, "detector capacitance"},
    ParamKey{"l", Dimension::kLength, &P::l, "typical length scale"},
    ParamKey{"b", Dimension::kLength, &P::b, "length of regions U and B"},
    ParamKey{"d", Dimension::kLength, &P::d, "channel separation at B"},
    ParamKey{"L", Dimension::kLength, &P::L, "U-to-B distance"},
    ParamKey{"T_delay_ratio", Dimension::kDimensionless, &P::T_delay_ratio, "v_g T / L"},
    ParamKey{"nu_S", Dimension::kDimensionless, &P::nu_S, "filling factor of S"},
    ParamKey{"nu_U", Dimension::kDimensionless, &P::nu_U, "filling factor of U"},
    ParamKey{"lambda_amp", Dimension::kDimensionless, &P::lambda_amp, "maximum of lambda_B"},
    ParamKey{"eps_r", Dimension::kDimensionless, &P::eps_r, "relative permittivity"},
    ParamKey{"temperature", Dimension::kTemperature, &P::temperature, "bath temperature"},
    ParamKey{"eps_uv", Dimension::kLength, &P::eps_uv, "short-distance regulator"},
    ParamKey{"omega_c", Dimension::kAngularFrequency, &P::omega_c, "detector frequency cutoff"},
    ParamKey{"sigma_A", Dimension::kLength, &P::sigma_A, "width of w_A"},
    ParamKey{"sigma_B", Dimension::kLength, &P::sigma_B, "width of lambda_B"},
};

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

ExperimentParams default_params() {
  ExperimentParams p;
  p.v_g = 1e6;
  p.R = 1e4;
  p.C = 1e-14;
  p.l = 1e-5;
  p.b = 1e-5;
  p.d = 1e-5;
  p.L = 2 * p.l;
  p.T_delay_ratio = 0.01;
  p.nu_S = 3;
  p.nu_U = 6;
  p.lambda_amp = 10;
  p.eps_r = 10;
  p.temperature = 0.01;
  p.eps_uv = p.l / 100;
  p.omega_c = 100 / (p.R * p.C);
  p.sigma_A = p.l;
  p.sigma_B = p.b;
  return p;
}

std::span<const ParamKey> param_keys() { return kKeys; }

const ParamKey* find_param_key(std::string_view name) {
  for (const auto& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string_view issue_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::kFastDetectorViolation: return "FastDetectorViolation";
    case IssueKind::kNonPositiveParameter: return "NonPositiveParameter";
    case IssueKind::kRegimeWarning: return "RegimeWarning";
  }
  return "?";
}

std::vector<ValidationIssue> check_params(const ExperimentParams& p) {
  std::vector<ValidationIssue> issues;
  auto error = [&](const std::string& msg) {
    issues.push_back({IssueKind::kNonPositiveParameter, Severity::kError, msg});
  };
  for (const auto& k : kKeys) {
    double v = p.*k.member;
    bool may_be_zero = k.name == "T_delay_ratio" || k.name == "lambda_amp" ||
                       k.name == "temperature";
    if (!std::isfinite(v)) {
      error(std::string(k.name) + " is not finite");
    } else if (may_be_zero ? v < 0 : v <= 0) {
      error(std::string(k.name) + " = " + fmt_double(v) +
            (may_be_zero ? " must be >= 0" : " must be > 0"));
    }
  }
  if (std::isfinite(p.R) && std::isfinite(p.C) && p.l > 0 && p.v_g > 0) {
    double rc = p.R * p.C;
    double transit = p.l / p.v_g;
    if (rc > 0.1 * transit) {
      issues.push_back({IssueKind::kFastDetectorViolation, Severity::kWarning,
                        "RC = " + fmt_double(rc) + " s exceeds 0.1 l/v_g = " +
                            fmt_double(0.1 * transit) + " s"});
    }
  }
  if (p.l > 0 && p.L < 2 * p.l) {
    issues.push_back({IssueKind::kRegimeWarning, Severity::kWarning,
                      "L = " + fmt_double(p.L) + " m is below 2l = " + fmt_double(2 * p.l) +
                          " m; E_B evaluation needs allow_short_L"});
  }
  return issues;
}

bool ValidatedParams::has_warning(IssueKind kind) const {
  for (const auto& w : warnings_) {
    if (w.kind == kind) return true;
  }
  return false;
}

ValidatedParams validate(const ExperimentParams& p) {
  std::vector<std::string> errors;
  std::vector<ValidationIssue> warnings;
  for (auto& issue : check_params(p)) {
    if (issue.severity == Severity::kError) {
      errors.push_back(std::string(issue_name(issue.kind)) + ": " + issue.message);
    } else {
      warnings.push_back(std::move(issue));
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return ValidatedParams(p, std::move(warnings));
}

double thermal_energy(double temperature) { return PhysicalConstants::kB * temperature; }

}  // namespace hallqet
