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

#include "hallqet/param_file.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hallqet/errors.hpp"

namespace hallqet {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_bool_key(std::string_view key) { return key == "allow_short_L"; }

// Splits "3.5e-6 [m]", "3.5e-6 m" or "3l" into number and unit.
bool parse_value_unit(std::string_view text, double& value, std::string& unit,
                      std::string& problem) {
  text = trim(text);
  if (text.empty()) {
    problem = "missing value";
    return false;
  }
  std::string buf(text);
  char* end = nullptr;
  errno = 0;
  value = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str()) {
    problem = "cannot parse number from '" + buf + "'";
    return false;
  }
  if (errno == ERANGE || !std::isfinite(value)) {
    problem = "number out of range: '" + buf + "'";
    return false;
  }
  std::string_view rest = trim(std::string_view(end));
  if (!rest.empty() && rest.front() == '[') {
    if (rest.back() != ']') {
      problem = "unterminated unit bracket in '" + buf + "'";
      return false;
    }
    rest = trim(rest.substr(1, rest.size() - 2));
  }
  if (rest.find_first_of(" \t") != std::string_view::npos) {
    problem = "unexpected trailing text '" + std::string(rest) + "'";
    return false;
  }
  unit = std::string(rest);
  return true;
}

std::string check_assignment(const Assignment& a) {
  if (is_bool_key(a.key)) {
    if (!a.unit.empty() || (a.value != 0 && a.value != 1)) {
      return "allow_short_L takes 0 or 1";
    }
    return {};
  }
  const ParamKey* key = find_param_key(a.key);
  if (key == nullptr) return "unknown key '" + a.key + "'";
  if (a.unit == "l") {
    if (key->dim != Dimension::kLength || a.key == "l") {
      return "unit 'l' is only allowed for lengths other than l itself";
    }
    return {};
  }
  if (!unit_factor(key->dim, a.unit)) {
    return "unit '" + a.unit + "' does not match " + std::string(dimension_name(key->dim)) +
           " key '" + a.key + "'";
  }
  return {};
}

}  // namespace

std::vector<Assignment> parse_param_text(std::string_view text, std::string_view origin) {
  std::vector<Assignment> out;
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = std::string(origin) + ":" + std::to_string(line_no);
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where + ": expected 'key = value [unit]'");
      continue;
    }
    Assignment a;
    a.key = std::string(trim(line.substr(0, eq)));
    a.origin = where;
    std::string problem;
    if (!parse_value_unit(line.substr(eq + 1), a.value, a.unit, problem)) {
      problems.push_back(where + ": " + problem);
      continue;
    }
    problem = check_assignment(a);
    if (!problem.empty()) {
      problems.push_back(where + ": " + problem);
      continue;
    }
    out.push_back(std::move(a));
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return out;
}

std::vector<Assignment> read_param_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot open parameter file " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_param_text(ss.str(), path.filename().string());
}

Assignment parse_override(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError({"--set " + std::string(text) + ": expected KEY=VALUE"});
  }
  Assignment a;
  a.key = std::string(trim(text.substr(0, eq)));
  a.origin = "--set";
  std::string problem;
  if (!parse_value_unit(text.substr(eq + 1), a.value, a.unit, problem)) {
    throw ValidationError({"--set " + a.key + ": " + problem});
  }
  problem = check_assignment(a);
  if (!problem.empty()) throw ValidationError({"--set " + a.key + ": " + problem});
  return a;
}

ExperimentParams resolve_params(std::span<const Assignment> assignments) {
  std::map<std::string, const Assignment*> last;
  for (const auto& a : assignments) {
    std::string problem = check_assignment(a);
    if (!problem.empty()) throw ValidationError({a.origin + ": " + problem});
    last[a.key] = &a;
  }
  ExperimentParams p = default_params();
  // Relative quantities follow their base unless given.
  for (const auto& [key, a] : last) {
    if (is_bool_key(key)) {
      p.allow_short_L = a->value != 0;
      continue;
    }
    if (a->unit == "l") continue;
    const ParamKey* k = find_param_key(key);
    p.*k->member = a->value * *unit_factor(k->dim, a->unit);
  }
  for (const auto& [key, a] : last) {
    if (a->unit != "l") continue;
    p.*find_param_key(key)->member = a->value * p.l;
  }
  if (!last.count("L")) p.L = 2 * p.l;
  if (!last.count("eps_uv")) p.eps_uv = p.l / 100;
  if (!last.count("omega_c")) p.omega_c = 100 / (p.R * p.C);
  if (!last.count("sigma_A")) p.sigma_A = p.l;
  if (!last.count("sigma_B")) p.sigma_B = p.b;
  return p;
}

std::string format_param_file(const ExperimentParams& p) {
  std::string out;
  char buf[64];
  for (const auto& k : param_keys()) {
    std::snprintf(buf, sizeof buf, "%.17g", p.*k.member);
    out += std::string(k.name) + " = " + buf + " [" + std::string(si_symbol(k.dim)) + "]\n";
  }
  out += std::string("allow_short_L = ") + (p.allow_short_L ? "1" : "0") + "\n";
  return out;
}

}  // namespace hallqet
