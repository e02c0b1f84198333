// Copyright 2026 The pcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcnot/runner.hpp"

namespace pcnot {

/// Strict parse: unknown keys, wrong types and unknown names are ConfigErrors.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

/// Every field written out, keys sorted.
nlohmann::json scenario_to_json(const Scenario& sc);
std::string canonical_json(const Scenario& sc);
/// 64-bit FNV-1a of the canonical JSON.
std::uint64_t scenario_hash(const Scenario& sc);
std::string hex64(std::uint64_t v);

/// Object of "X-Y": overlap entries.
DistinguishabilityConfig overlaps_from_json(const nlohmann::json& j);
DistinguishabilityConfig load_overlap_file(const std::string& path);

enum class OutputFormat { kCsv, kJson };

struct RunOutput {
  std::string text;
  std::vector<std::string> violations;
};

/// Runs the scenario's experiment and renders the table (CSV) or the summary
/// (JSON). Both carry the scenario hash and seed.
RunOutput run_scenario(const Scenario& sc, OutputFormat format);

}  // namespace pcnot
