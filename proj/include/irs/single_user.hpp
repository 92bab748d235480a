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

/// @file single_user.hpp
/// @brief Single-user BPSK designs.
///
/// With one user and one CIR row the optimal transmit vector is MRT along
/// g = Hbar^T D^T theta and the transmit amplitude is
///
///     P(theta) = xi / (||g|| - rho),   rho = delta ||a|| sqrt(N),
///
/// so the phase design reduces to maximizing ||g||^2 = theta^T W theta with
/// W = D Hbar Hbar^T D^T over unit-modulus theta.

#pragma once

#include "irs/cone.hpp"
#include "irs/robust.hpp"

#include <random>
#include <vector>

namespace irs {

/// Single-user, single-row instance view. Throws std::invalid_argument when
/// the instance has more users, more rows, direct links, or xi <= 0.
void require_single_user_bpsk(const RobustInstance& instance);

/// W = D Hbar Hbar^T D^T.
RMatrix bpsk_gram(const RobustInstance& instance);

/// Transmit amplitude for a given theta; +inf when ||g|| <= rho.
double closed_form_amplitude(const RobustInstance& instance, const RVector& theta);

/// MRT transmit vector scaled to the closed-form amplitude.
RVector mrt_transmit(const RobustInstance& instance, const RVector& theta);

/// Rank counting eigenvalues above rel_tol * largest.
int numerical_rank(const RMatrix& psd, double rel_tol = 1e-6);

/// Rank reduction of an SDR solution. Whenever the J-partner of an
/// eigenvector (J = [[0, -I], [I, 0]]) lies in the span of the other
/// eigenvectors, that eigenvector is swapped for its partner. W and every
/// B_n^T B_n commute with J, so the objective and trace constraints are
/// unchanged and the rank drops by one.
RMatrix rank_reduce(const RMatrix& theta, double pair_tol = 1e-6, double rank_tol = 1e-6);

struct SdrOptions {
  int draws = 1000;
  cone::SolveOptions solver;
};

struct SdrSolution {
  RMatrix relaxed;      ///< SDP solution
  RMatrix reduced;      ///< after rank_reduce
  int rank_relaxed = 0;
  int rank_reduced = 0;
  double sdp_objective = 0.0;
  double amplitude_lower_bound = 0.0;
  int draws = 0;        ///< randomization samples used (0 when rank one)
  RVector theta;
  RVector x;
  double amplitude = 0.0;
  double power = 0.0;   ///< ||x||^2 [W]
  bool feasible = false;
  cone::SolveStatus status = cone::SolveStatus::kNumericalFailure;
  double wall_time_ms = 0.0;
};

SdrSolution sdr_solve(const RobustInstance& instance, std::mt19937_64& rng, const SdrOptions& options = {});

struct AoOptions {
  double eps = 1e-4;
  int max_iter = 100;
};

struct AoTrace {
  std::vector<double> power;  ///< ||x||^2 per iteration [W]
  RVector theta;
  RVector x;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  double wall_time_ms = 0.0;

  double final_power() const { return power.empty() ? 0.0 : power.back(); }
};

/// Alternating MRT and closed-form phase alignment from theta0.
AoTrace ao_solve(const RobustInstance& instance, const RVector& theta0, const AoOptions& options = {});

/// Uniform random unit-modulus lifted phase vector.
RVector random_phases(int n, std::mt19937_64& rng);

}  // namespace irs
