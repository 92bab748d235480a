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

#include "irs/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irs {
namespace {

using json = nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void type_error(const std::string& key, const char* what) {
  throw ConfigError(key, "config key '" + key + "' must be " + what);
}

double get_number(const std::string& key, const json& v) {
  if (!v.is_number()) type_error(key, "a number");
  return v.get<double>();
}

int get_int(const std::string& key, const json& v) {
  if (!v.is_number_integer()) type_error(key, "an integer");
  return v.get<int>();
}

std::string get_string(const std::string& key, const json& v) {
  if (!v.is_string()) type_error(key, "a string");
  return v.get<std::string>();
}

bool get_bool(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    try {
      return parse_switch(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  type_error(key, "a boolean or \"on\"/\"off\"");
}

std::vector<double> get_numbers(const std::string& key, const json& v) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) type_error(key, "a number or a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) type_error(key, "a number or a non-empty array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::string> get_strings(const std::string& key, const json& v) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array() || v.empty()) type_error(key, "a string or a non-empty array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) type_error(key, "a string or a non-empty array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

using Setter = std::function<void(const std::string&, const json&, RunConfig&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"m", [](auto& k, auto& v, RunConfig& c) { c.scenario.m = get_int(k, v); }},
      {"n", [](auto& k, auto& v, RunConfig& c) { c.scenario.n = get_int(k, v); }},
      {"k", [](auto& k, auto& v, RunConfig& c) { c.scenario.k = get_int(k, v); }},
      {"d_bi", [](auto& k, auto& v, RunConfig& c) { c.scenario.d_bi = get_number(k, v); }},
      {"d_iu", [](auto& k, auto& v, RunConfig& c) { c.scenario.d_iu = get_number(k, v); }},
      {"alpha_bi", [](auto& k, auto& v, RunConfig& c) { c.scenario.alpha_bi = get_number(k, v); }},
      {"alpha_iu", [](auto& k, auto& v, RunConfig& c) { c.scenario.alpha_iu = get_number(k, v); }},
      {"alpha_bu", [](auto& k, auto& v, RunConfig& c) { c.scenario.alpha_bu = get_number(k, v); }},
      {"c0_db", [](auto& k, auto& v, RunConfig& c) { c.scenario.c0_db = get_number(k, v); }},
      {"d0", [](auto& k, auto& v, RunConfig& c) { c.scenario.d0 = get_number(k, v); }},
      {"rician_db", [](auto& k, auto& v, RunConfig& c) { c.scenario.rician_db = get_number(k, v); }},
      {"noise_dbm", [](auto& k, auto& v, RunConfig& c) { c.scenario.noise_dbm = get_number(k, v); }},
      {"gamma_db", [](auto& k, auto& v, RunConfig& c) { c.scenario.gamma_db = get_numbers(k, v); }},
      {"delta", [](auto& k, auto& v, RunConfig& c) { c.scenario.delta = get_numbers(k, v); }},
      {"delta_direct", [](auto& k, auto& v, RunConfig& c) { c.scenario.delta_direct = get_numbers(k, v); }},
      {"bits",
       [](auto& k, auto& v, RunConfig& c) {
         if (v.is_number_integer() && v.template get<int>() >= 0) {
           c.scenario.bits = v.template get<int>();
           return;
         }
         if (v.is_string()) {
           try {
             c.scenario.bits = parse_bits(v.template get<std::string>());
             return;
           } catch (const std::invalid_argument&) {
           }
         }
         type_error(k, "\"inf\" or a non-negative integer");
       }},
      {"direct_links", [](auto& k, auto& v, RunConfig& c) { c.scenario.direct_links = get_bool(k, v); }},
      {"constellation", [](auto& k, auto& v, RunConfig& c) { c.scenario.constellation = lower(get_string(k, v)); }},
      {"random_user_angles", [](auto& k, auto& v, RunConfig& c) { c.scenario.random_user_angles = get_bool(k, v); }},
      {"error_mode",
       [](auto& k, auto& v, RunConfig& c) {
         const std::string s = lower(get_string(k, v));
         if (s == "surface") c.scenario.error_mode = ErrorMode::kSurface;
         else if (s == "interior") c.scenario.error_mode = ErrorMode::kInterior;
         else type_error(k, "\"surface\" or \"interior\"");
       }},
      {"seed",
       [](auto& k, auto& v, RunConfig& c) {
         if (!v.is_number_unsigned()) type_error(k, "a non-negative integer");
         c.scenario.seed = v.template get<std::uint64_t>();
       }},
      {"method", [](auto& k, auto& v, RunConfig& c) { c.methods = get_strings(k, v); }},
      {"trials", [](auto& k, auto& v, RunConfig& c) { c.trials = get_int(k, v); }},
      {"out", [](auto& k, auto& v, RunConfig& c) { c.out = get_string(k, v); }},
      {"preset", [](auto& k, auto& v, RunConfig& c) { c.preset = get_string(k, v); }},
      {"param", [](auto& k, auto& v, RunConfig& c) { c.param = get_string(k, v); }},
      {"values", [](auto& k, auto& v, RunConfig& c) { c.values = get_numbers(k, v); }},
      {"ser_symbols", [](auto& k, auto& v, RunConfig& c) { c.ser_symbols = get_int(k, v); }},
      {"scatter", [](auto& k, auto& v, RunConfig& c) { c.scatter = get_string(k, v); }},
      {"threads", [](auto& k, auto& v, RunConfig& c) { c.threads = get_int(k, v); }},
      {"lambda", [](auto& k, auto& v, RunConfig& c) { c.lambda = get_number(k, v); }},
      {"beta", [](auto& k, auto& v, RunConfig& c) { c.beta = get_number(k, v); }},
      {"eps_inner", [](auto& k, auto& v, RunConfig& c) { c.eps_inner = get_number(k, v); }},
      {"eps_outer", [](auto& k, auto& v, RunConfig& c) { c.eps_outer = get_number(k, v); }},
      {"max_outer", [](auto& k, auto& v, RunConfig& c) { c.max_outer = get_int(k, v); }},
      {"max_inner", [](auto& k, auto& v, RunConfig& c) { c.max_inner = get_int(k, v); }},
      {"ao_eps", [](auto& k, auto& v, RunConfig& c) { c.ao_eps = get_number(k, v); }},
      {"ao_max_iter", [](auto& k, auto& v, RunConfig& c) { c.ao_max_iter = get_int(k, v); }},
      {"draws", [](auto& k, auto& v, RunConfig& c) { c.draws = get_int(k, v); }},
  };
  return table;
}

}  // namespace

int parse_bits(const std::string& text) {
  const std::string s = lower(text);
  if (s == "inf" || s == "0") return 0;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bits must be 'inf' or a positive integer, got '" + text + "'");
  }
  if (used != s.size() || v < 0) throw std::invalid_argument("bits must be 'inf' or a positive integer, got '" + text + "'");
  return v;
}

bool parse_switch(const std::string& text) {
  const std::string s = lower(text);
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  throw std::invalid_argument("expected on/off, got '" + text + "'");
}

void apply_config_json(const std::string& text, RunConfig& config) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "config must be a JSON object");
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown config key '" + key + "'");
    it->second(key, value, config);
  }
}

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_json(ss.str(), config);
}

std::string describe_config(const RunConfig& c) {
  const ScenarioConfig& s = c.scenario;
  json j = {
      {"m", s.m},
      {"n", s.n},
      {"k", s.k},
      {"d_bi", s.d_bi},
      {"d_iu", s.d_iu},
      {"alpha_bi", s.alpha_bi},
      {"alpha_iu", s.alpha_iu},
      {"alpha_bu", s.alpha_bu},
      {"c0_db", s.c0_db},
      {"d0", s.d0},
      {"rician_db", s.rician_db},
      {"noise_dbm", s.noise_dbm},
      {"gamma_db", s.gamma_db},
      {"delta", s.delta},
      {"delta_direct", s.delta_direct},
      {"bits", s.bits == 0 ? json("inf") : json(s.bits)},
      {"direct_links", s.direct_links},
      {"constellation", s.constellation},
      {"random_user_angles", s.random_user_angles},
      {"error_mode", s.error_mode == ErrorMode::kSurface ? "surface" : "interior"},
      {"seed", s.seed},
  };
  if (!c.methods.empty()) j["method"] = c.methods;
  if (c.trials) j["trials"] = *c.trials;
  if (c.preset) j["preset"] = *c.preset;
  if (c.param) j["param"] = *c.param;
  if (!c.values.empty()) j["values"] = c.values;
  if (c.ser_symbols) j["ser_symbols"] = *c.ser_symbols;
  if (c.lambda) j["lambda"] = *c.lambda;
  if (c.beta) j["beta"] = *c.beta;
  if (c.eps_inner) j["eps_inner"] = *c.eps_inner;
  if (c.eps_outer) j["eps_outer"] = *c.eps_outer;
  if (c.max_outer) j["max_outer"] = *c.max_outer;
  if (c.max_inner) j["max_inner"] = *c.max_inner;
  if (c.ao_eps) j["ao_eps"] = *c.ao_eps;
  if (c.ao_max_iter) j["ao_max_iter"] = *c.ao_max_iter;
  if (c.draws) j["draws"] = *c.draws;
  return j.dump();
}

}  // namespace irs
