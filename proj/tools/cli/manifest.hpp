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
#include <string>
#include <vector>

#include "json.hpp"

#include "hallqet/param_file.hpp"
#include "hallqet/params.hpp"

namespace hallqet::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kManifestName = "manifest.json";

// Where the parameters came from. Informational only: a re-run replays the
// recorded assignments, so the original file need not exist any more.
struct ParamSource {
  std::string params_file;
  std::vector<std::string> overrides;
};

Json params_to_json(const ExperimentParams& p);
Json assignments_to_json(const std::vector<Assignment>& a);
std::vector<Assignment> assignments_from_json(const Json& j);
// Inverse of params_to_json; throws ValidationError on missing keys.
ExperimentParams params_from_json(const Json& j);

// Conventions fixed by this implementation that a reader of the outputs
// needs to interpret them.
Json conventions();

struct Manifest {
  std::string command;
  ParamSource source;
  std::vector<Assignment> assignments;  // replayed on re-run
  ExperimentParams params;              // resolved, for reference
  std::vector<std::string> warnings;
  Json options = Json::object();   // command-specific settings (seed, grid, tolerances, ...)
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0;   // not part of any data file
};

Json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const Json& j);
Manifest read_manifest(const std::filesystem::path& path);

// Writes text with '\n' line endings, replacing any existing file.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace hallqet::cli
