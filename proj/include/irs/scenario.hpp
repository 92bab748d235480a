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

#pragma once

#include "irs/lift.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace irs {

enum class ErrorMode { kSurface, kInterior };

/// Simulation scenario. Defaults reproduce the reference deployment: a
/// 4-antenna BS at the origin, the IRS 50 m away on the x-axis and users on a
/// 3 m circle around the IRS.
struct ScenarioConfig {
  int m = 4;   ///< BS antennas
  int n = 16;  ///< IRS elements
  int k = 1;   ///< users

  double d_bi = 50.0;  ///< BS-IRS distance [m]
  double d_iu = 3.0;   ///< IRS-user distance [m]
  double alpha_bi = 2.5;
  double alpha_iu = 2.8;
  double alpha_bu = 3.5;
  double c0_db = 30.0;  ///< path loss at the reference distance [dB]
  double d0 = 1.0;      ///< reference distance [m]
  double rician_db = 3.0;
  double noise_dbm = -80.0;

  /// Per-user SNR targets [dB] and error radii. A single entry applies to
  /// every user.
  std::vector<double> gamma_db{10.0};
  std::vector<double> delta{0.02};
  std::vector<double> delta_direct{0.02};

  int bits = 0;  ///< IRS phase resolution; 0 means continuous
  bool direct_links = false;
  std::string constellation = "qpsk";
  bool random_user_angles = false;
  ErrorMode error_mode = ErrorMode::kSurface;
  std::uint64_t seed = 1;

  double gamma_linear(int user) const;
  double delta_for(int user) const;
  double delta_direct_for(int user) const;
  /// Noise standard deviation in sqrt(W).
  double noise_amplitude() const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Channels of one realization. All gains are divided by the noise amplitude
/// in sqrt(W), so the received noise has unit variance, error radii are
/// dimensionless and ||x||^2 is the transmit power in W.
struct ChannelSet {
  CMatrix bs_irs;                      ///< G, N x M
  std::vector<CVector> irs_user;       ///< h_k, N each
  std::vector<CMatrix> estimate;       ///< concatenated estimate, N x M
  std::vector<CMatrix> error;          ///< Delta_k
  std::vector<CMatrix> actual;         ///< estimate + error
  std::vector<CVector> direct_estimate;  ///< conj of h_dk, so y += direct^T x
  std::vector<CVector> direct_error;
  std::vector<CVector> direct_actual;
  std::vector<Eigen::Vector2d> user_positions;

  bool has_direct() const { return !direct_estimate.empty(); }
};

/// Watts to dBm.
double power_dbm(double watts);

/// C0 * (d / d0)^-alpha in linear scale, with C0 given as a loss in dB.
double path_loss(double distance, double alpha, double c0_db, double d0);

/// Seed for an independent stream, derived from a master seed and indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Half-wavelength ULA steering vector for an angle from broadside.
CVector steering_vector(int size, double angle);

/// Complex perturbation with ||Delta||_F = (sqrt(2)/2) * radius (surface) or
/// uniform in that ball (interior).
CMatrix sample_error(int rows, int cols, double radius, ErrorMode mode, std::mt19937_64& rng);

/// I.i.d. CN(0, variance) matrix.
CMatrix complex_gaussian(int rows, int cols, double variance, std::mt19937_64& rng);

std::vector<Eigen::Vector2d> user_positions(const ScenarioConfig& config, std::mt19937_64& rng);

ChannelSet generate_channels(const ScenarioConfig& config, std::mt19937_64& rng);

/// Re-draw the estimation errors (and the actual channels) of an existing set.
void redraw_errors(const ScenarioConfig& config, ChannelSet& channels, std::mt19937_64& rng);

}  // namespace irs
