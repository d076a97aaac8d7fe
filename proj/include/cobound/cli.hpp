// Copyright 2026 The cobound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COBOUND_CLI_HPP
#define COBOUND_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cobound::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kVerdictFailure = 1, kConfigError = 2 };

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

std::vector<std::string> preset_names();
/// Throws PreconditionError for an unknown name.
nlohmann::ordered_json preset(const std::string& name);

/// Preset defaults overlaid with the user document; checks keys and the schema version.
nlohmann::ordered_json resolve_config(const nlohmann::ordered_json& user);

}  // namespace cobound::cli

#endif  // COBOUND_CLI_HPP
