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

#include "irs/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irs {
namespace {

double per_user(const std::vector<double>& values, int user) {
  if (values.size() == 1) return values.front();
  return values.at(static_cast<std::size_t>(user));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_per_user(const std::vector<double>& values, int k, const char* field) {
  if (values.empty() || (values.size() != 1 && values.size() != static_cast<std::size_t>(k)))
    throw std::invalid_argument(std::string(field) + ": expected one value or one per user");
}

}  // namespace

double ScenarioConfig::gamma_linear(int user) const { return std::pow(10.0, per_user(gamma_db, user) / 10.0); }
double ScenarioConfig::delta_for(int user) const { return per_user(delta, user); }
double ScenarioConfig::delta_direct_for(int user) const { return per_user(delta_direct, user); }
double ScenarioConfig::noise_amplitude() const { return std::sqrt(std::pow(10.0, (noise_dbm - 30.0) / 10.0)); }

double power_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

void ScenarioConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m: must be >= 1");
  if (n < 1) throw std::invalid_argument("n: must be >= 1");
  if (k < 1) throw std::invalid_argument("k: must be >= 1");
  if (!(d_bi > 0.0)) throw std::invalid_argument("d_bi: must be > 0");
  if (!(d_iu > 0.0)) throw std::invalid_argument("d_iu: must be > 0");
  if (!(d0 > 0.0)) throw std::invalid_argument("d0: must be > 0");
  if (bits < 0) throw std::invalid_argument("bits: must be >= 0 (0 = continuous)");
  check_per_user(gamma_db, k, "gamma_db");
  check_per_user(delta, k, "delta");
  check_per_user(delta_direct, k, "delta_direct");
  for (double d : delta)
    if (!(d >= 0.0)) throw std::invalid_argument("delta: must be >= 0");
  for (double d : delta_direct)
    if (!(d >= 0.0)) throw std::invalid_argument("delta_direct: must be >= 0");
}

double path_loss(double distance, double alpha, double c0_db, double d0) {
  return std::pow(10.0, -c0_db / 10.0) * std::pow(distance / d0, -alpha);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(master ^ splitmix64(a)) ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

CVector steering_vector(int size, double angle) {
  CVector v(size);
  for (int i = 0; i < size; ++i) v(i) = std::polar(1.0, std::numbers::pi * i * std::sin(angle));
  return v;
}

CMatrix complex_gaussian(int rows, int cols, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  CMatrix out(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = cdouble(re, im);
    }
  return out;
}

CMatrix sample_error(int rows, int cols, double radius, ErrorMode mode, std::mt19937_64& rng) {
  if (radius <= 0.0) return CMatrix::Zero(rows, cols);
  CMatrix dir = complex_gaussian(rows, cols, 1.0, rng);
  double norm = dir.norm();
  while (norm == 0.0) {
    dir = complex_gaussian(rows, cols, 1.0, rng);
    norm = dir.norm();
  }
  double r = std::sqrt(2.0) / 2.0 * radius;
  if (mode == ErrorMode::kInterior) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    r *= std::pow(u(rng), 1.0 / (2.0 * rows * cols));
  }
  return dir * (r / norm);
}

std::vector<Eigen::Vector2d> user_positions(const ScenarioConfig& config, std::mt19937_64& rng) {
  std::vector<Eigen::Vector2d> out;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const Eigen::Vector2d irs(config.d_bi, 0.0);
  for (int k = 0; k < config.k; ++k) {
    const double psi = config.random_user_angles ? angle(rng) : 2.0 * std::numbers::pi * k / config.k;
    out.push_back(irs + config.d_iu * Eigen::Vector2d(std::cos(psi), std::sin(psi)));
  }
  return out;
}

ChannelSet generate_channels(const ScenarioConfig& config, std::mt19937_64& rng) {
  config.validate();
  const int n = config.n;
  const int m = config.m;
  const double sigma = config.noise_amplitude();
  ChannelSet set;
  set.user_positions = user_positions(config, rng);

  // BS and IRS arrays both lie along the y-axis, so the BS-IRS link is at
  // broadside for both ends.
  const Eigen::Vector2d irs(config.d_bi, 0.0);
  const double link_angle = std::atan2(irs.y(), irs.x());
  const CMatrix los = steering_vector(n, -link_angle) * steering_vector(m, link_angle).adjoint();
  const double kr = std::pow(10.0, config.rician_db / 10.0);
  const CMatrix nlos = complex_gaussian(n, m, 1.0, rng);
  const double pl_bi = path_loss(config.d_bi, config.alpha_bi, config.c0_db, config.d0);
  set.bs_irs = std::sqrt(pl_bi) * (std::sqrt(kr / (kr + 1.0)) * los + std::sqrt(1.0 / (kr + 1.0)) * nlos);

  const double pl_iu = path_loss(config.d_iu, config.alpha_iu, config.c0_db, config.d0);
  for (int k = 0; k < config.k; ++k) {
    const CVector h = complex_gaussian(n, 1, pl_iu, rng).col(0);
    set.irs_user.push_back(h);
    set.estimate.push_back(h.conjugate().asDiagonal() * set.bs_irs / sigma);
  }
  if (config.direct_links) {
    for (int k = 0; k < config.k; ++k) {
      const double d_bu = set.user_positions[static_cast<std::size_t>(k)].norm();
      const double pl_bu = path_loss(d_bu, config.alpha_bu, config.c0_db, config.d0);
      const CVector hd = complex_gaussian(m, 1, pl_bu, rng).col(0);
      set.direct_estimate.push_back(hd.conjugate() / sigma);
    }
  }
  redraw_errors(config, set, rng);
  return set;
}

void redraw_errors(const ScenarioConfig& config, ChannelSet& set, std::mt19937_64& rng) {
  set.error.clear();
  set.actual.clear();
  set.direct_error.clear();
  set.direct_actual.clear();
  for (int k = 0; k < config.k; ++k) {
    const auto& est = set.estimate[static_cast<std::size_t>(k)];
    CMatrix err = sample_error(static_cast<int>(est.rows()), static_cast<int>(est.cols()), config.delta_for(k),
                               config.error_mode, rng);
    set.actual.push_back(est + err);
    set.error.push_back(std::move(err));
  }
  for (std::size_t k = 0; k < set.direct_estimate.size(); ++k) {
    const auto& est = set.direct_estimate[k];
    CVector err = sample_error(static_cast<int>(est.size()), 1, config.delta_direct_for(static_cast<int>(k)),
                               config.error_mode, rng)
                      .col(0);
    set.direct_actual.push_back(est + err);
    set.direct_error.push_back(std::move(err));
  }
}

}  // namespace irs
