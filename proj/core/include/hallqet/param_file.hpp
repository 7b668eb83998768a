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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hallqet/params.hpp"

namespace hallqet {

// One `key = value [unit]` assignment. A length may use the unit `l`, meaning
// a multiple of the resolved typical length scale (e.g. `L = 3 l`).
struct Assignment {
  std::string key;
  double value = 0;
  std::string unit;
  std::string origin;  // "file.params:12" or "--set"
};

// Parses parameter text. Blank lines and `#` comments are skipped; unknown
// keys, malformed lines and unit mismatches raise ValidationError with the
// offending line numbers.
std::vector<Assignment> parse_param_text(std::string_view text, std::string_view origin);
std::vector<Assignment> read_param_file(const std::filesystem::path& path);

// Parses `KEY=VALUE[UNIT]` as given to --set.
Assignment parse_override(std::string_view text);

// Applies assignments (later ones win) on top of the built-in defaults.
// eps_uv, omega_c, sigma_A and sigma_B follow l, R, C and b unless they are
// assigned explicitly.
ExperimentParams resolve_params(std::span<const Assignment> assignments);

// Canonical text form: every key in SI with round-trip precision, so that
// resolve_params(parse_param_text(format_param_file(p))) == p.
std::string format_param_file(const ExperimentParams& p);

}  // namespace hallqet
