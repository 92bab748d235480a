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

/// @file harness.hpp
/// @brief Monte Carlo sweeps: average power, SER and wall time per grid
/// point and method.
///
/// Methods are strings of the form `kind[:modifier...]`:
///
///   kind      sdr | bound | ao | pgd | random
///   modifier  b<bits> | inf | direct | nodirect | bpsk | qpsk | 8psk | 16qam
///             | delta=<value>
///
/// `sdr`, `bound` and `ao` are the single-user BPSK designs (`bound` reports
/// the relaxation lower bound). `pgd` is the multiuser alternating design and
/// `random` keeps random phases and solves only the transmit step.

#pragma once

#include "irs/constellation.hpp"
#include "irs/multiuser.hpp"
#include "irs/scenario.hpp"
#include "irs/single_user.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irs {

enum class MethodKind { kSdr, kSdrBound, kAo, kPgd, kRandom };

struct MethodSpec {
  std::string label;
  MethodKind kind = MethodKind::kPgd;
  std::optional<int> bits;
  std::optional<bool> direct;
  std::optional<std::string> constellation;
  std::optional<double> delta;

  bool single_user() const { return kind == MethodKind::kSdr || kind == MethodKind::kSdrBound || kind == MethodKind::kAo; }
  /// Base config with this method's modifiers applied.
  ScenarioConfig apply(const ScenarioConfig& base) const;
};

/// Throws std::invalid_argument on an unknown kind or modifier.
MethodSpec parse_method(const std::string& text);

enum class SweepKind { kPower, kSer, kTiming };

struct SweepSpec {
  std::string id = "custom";
  SweepKind kind = SweepKind::kPower;
  std::string param = "n";  ///< n | m | k | gamma_db | delta | bits | d_iu | d_bi | rician_db
  std::vector<double> values;
  int trials = 50;
  ScenarioConfig base;
  std::vector<std::string> methods;
  std::uint64_t seed = 1;
  int ser_symbols = 10000;   ///< symbol tuples per trial in SER runs
  std::string scatter_path;  ///< SER runs: received-sample dump prefix, empty = off
  int threads = 0;           ///< 0 = hardware concurrency
  SdrOptions sdr;
  AoOptions ao;
  MultiuserOptions multiuser;
};

/// Named figure presets: fig3a fig3b fig5 fig7 fig8a fig8b fig9 fig10.
/// Throws std::invalid_argument for an unknown name.
SweepSpec preset(const std::string& name);
std::vector<std::string> preset_names();

/// Sets one swept parameter. Throws std::invalid_argument for an unknown name.
void apply_param(ScenarioConfig& config, const std::string& param, double value);

/// Checks parameter name, grid, trials and method/scenario compatibility.
/// Throws std::invalid_argument with a readable message.
void validate(const SweepSpec& spec);

struct ResultRow {
  std::string param;
  double value = 0.0;
  std::string method;
  double mean_power_dbm = 0.0;
  double std_power_dbm = 0.0;
  double mean_ser = 0.0;  ///< NaN outside SER runs
  double mean_time_ms = 0.0;
  int trials = 0;    ///< successful trials
  int failures = 0;
};

struct ResultTable {
  std::vector<std::string> comments;  ///< written as '#' lines before the header
  std::vector<ResultRow> rows;

  const ResultRow* find(double value, const std::string& method) const;
};

ResultTable run_power_sweep(const SweepSpec& spec);
ResultTable run_ser(const SweepSpec& spec);
/// Power sweep that keeps only the single-user methods; forces one thread
/// so wall times are not distorted by contention.
ResultTable run_timing(SweepSpec spec);

/// Dispatch on spec.kind.
ResultTable run_sweep(const SweepSpec& spec);

void write_csv(std::ostream& out, const ResultTable& table);

/// One received sample, already divided by the target amplitude sqrt(gamma).
struct ScatterPoint {
  double re = 0.0;
  double im = 0.0;
  int user = 0;
  int symbol = 0;
};

/// Symbol error rate of a fixed phase design over `symbols` random symbol
/// tuples. Transmit vectors are designed on the estimates (one SOCP per
/// distinct tuple), received over the actual channels plus CN(0, noise_scale^2)
/// noise and detected per user. Tuples whose transmit step is infeasible count
/// as errors for every user.
double symbol_error_rate(const ChannelSet& channels, const ScenarioConfig& config, const RVector& theta,
                         bool use_direct, int symbols, std::mt19937_64& rng, double noise_scale = 1.0,
                         std::vector<ScatterPoint>* scatter = nullptr);

}  // namespace irs
