// SPDX-License-Identifier: Apache-2.0
//
// irs-slp: robust symbol-level precoding and IRS passive beamforming
// Copyright (C) 2026 The irs-slp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/// @file config.hpp
/// @brief JSON run configuration.
///
/// Scenario keys: m n k d_bi d_iu alpha_bi alpha_iu alpha_bu c0_db d0
/// rician_db noise_dbm gamma_db delta delta_direct (number or per-user
/// array) bits ("inf" or integer) direct_links (bool or "on"/"off")
/// constellation random_user_angles error_mode ("surface"/"interior") seed.
///
/// Run keys: method (string or array) trials out preset param values
/// ser_symbols scatter threads lambda beta eps_inner eps_outer max_outer
/// max_inner ao_eps ao_max_iter draws.

#pragma once

#include "irs/scenario.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Everything a run can be configured with. Unset optionals fall back to the
/// subcommand or preset default.
struct RunConfig {
  ScenarioConfig scenario;
  std::vector<std::string> methods;
  std::optional<int> trials;
  std::optional<std::string> out;
  std::optional<std::string> preset;
  std::optional<std::string> param;
  std::vector<double> values;
  std::optional<int> ser_symbols;
  std::optional<std::string> scatter;
  std::optional<int> threads;

  std::optional<double> lambda;
  std::optional<double> beta;
  std::optional<double> eps_inner;
  std::optional<double> eps_outer;
  std::optional<int> max_outer;
  std::optional<int> max_inner;
  std::optional<double> ao_eps;
  std::optional<int> ao_max_iter;
  std::optional<int> draws;
};

/// Overlays the keys of a JSON document onto `config`. Throws ConfigError
/// naming the first unknown or mistyped key.
void apply_config_json(const std::string& text, RunConfig& config);

/// Reads a file and applies it. Throws ConfigError (key "config") when the
/// file cannot be read or parsed.
void apply_config_file(const std::string& path, RunConfig& config);

/// Compact single-line JSON of the effective scenario and run settings.
std::string describe_config(const RunConfig& config);

/// "inf" -> 0, positive integer -> itself. Throws std::invalid_argument.
int parse_bits(const std::string& text);

/// "on"/"off"/"true"/"false"/"1"/"0". Throws std::invalid_argument.
bool parse_switch(const std::string& text);

}  // namespace irs
