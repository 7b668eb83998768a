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

#include "cli/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include "hallqet/errors.hpp"

namespace hallqet::cli {

Json params_to_json(const ExperimentParams& p) {
  Json j = Json::object();
  for (const ParamKey& k : param_keys()) j[std::string(k.name)] = p.*k.member;
  j["allow_short_L"] = p.allow_short_L;
  return j;
}

ExperimentParams params_from_json(const Json& j) {
  ExperimentParams p;
  std::vector<std::string> problems;
  for (const ParamKey& k : param_keys()) {
    auto it = j.find(std::string(k.name));
    if (it == j.end() || !it->is_number()) {
      problems.push_back("manifest params: missing numeric key " + std::string(k.name));
      continue;
    }
    p.*k.member = it->get<double>();
  }
  p.allow_short_L = j.value("allow_short_L", false);
  if (!problems.empty()) throw ValidationError(problems);
  return p;
}

Json assignments_to_json(const std::vector<Assignment>& a) {
  Json j = Json::array();
  for (const Assignment& x : a) {
    j.push_back({{"key", x.key}, {"value", x.value}, {"unit", x.unit}, {"origin", x.origin}});
  }
  return j;
}

std::vector<Assignment> assignments_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError({"manifest: 'assignments' must be an array"});
  std::vector<Assignment> out;
  for (const Json& x : j) {
    if (!x.contains("key") || !x.contains("value") || !x.at("value").is_number()) {
      throw ValidationError({"manifest: malformed assignment " + x.dump()});
    }
    out.push_back({x.at("key").get<std::string>(), x.at("value").get<double>(),
                   x.value("unit", ""), x.value("origin", "manifest")});
  }
  return out;
}

Json conventions() {
  Json j = Json::object();
  j["velocity_prefactor"] = "the velocity in every prefactor is the group velocity v_g";
  j["interaction_channel"] = "the energy gain is the change of H_U, the Hamiltonian of channel U";
  j["E_B_sign"] = "E_B carries the sign of the first-order expansion of <H_U>; positive means energy gained by U";
  j["feedback_waveform"] = "<rho_U> after feedback is (v / 2 dV) d lambda_B / dy";
  j["rho_S_filling"] = "the filling factor in the rho_S commutator is nu_S";
  j["E_B_domain"] = "lambda_B is integrated over its full support, +-window_cut sigma_B";
  j["energy_zero"] = "energies are normal ordered: the vacuum has zero energy";
  return j;
}

Json manifest_to_json(const Manifest& m) {
  Json j = Json::object();
  j["tool"] = "hallqet";
  j["version"] = HALLQET_VERSION_STRING;
  j["command"] = m.command;
  j["source"] = {{"params_file", m.source.params_file}, {"overrides", m.source.overrides}};
  j["assignments"] = assignments_to_json(m.assignments);
  j["params"] = params_to_json(m.params);
  Json units = Json::object();
  for (const ParamKey& k : param_keys()) units[std::string(k.name)] = std::string(si_symbol(k.dim));
  j["param_units"] = units;
  j["regulator"] = {{"eps_uv", m.params.eps_uv}, {"omega_c", m.params.omega_c}};
  j["warnings"] = m.warnings;
  j["options"] = m.options;
  j["conventions"] = conventions();
  j["outputs"] = m.outputs;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  return j;
}

Manifest manifest_from_json(const Json& j) {
  Manifest m;
  if (!j.is_object() || !j.contains("command") || !j.contains("params")) {
    throw ValidationError({"manifest: expected an object with 'command' and 'params'"});
  }
  m.command = j.at("command").get<std::string>();
  if (j.contains("source")) {
    const Json& s = j.at("source");
    m.source.params_file = s.value("params_file", "");
    if (s.contains("overrides")) m.source.overrides = s.at("overrides").get<std::vector<std::string>>();
  }
  m.params = params_from_json(j.at("params"));
  if (j.contains("assignments")) {
    m.assignments = assignments_from_json(j.at("assignments"));
  } else {
    // Older manifests: pin every key to its resolved SI value.
    for (const ParamKey& k : param_keys()) {
      m.assignments.push_back({std::string(k.name), m.params.*k.member, "", "manifest"});
    }
    m.assignments.push_back({"allow_short_L", m.params.allow_short_L ? 1.0 : 0.0, "", "manifest"});
  }
  if (j.contains("warnings")) m.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("options")) m.options = j.at("options");
  if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open manifest " + path.string()});
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError({path.string() + ": " + e.what()});
  }
  return manifest_from_json(j);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace hallqet::cli
