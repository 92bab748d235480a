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

/// @file multiuser.hpp
/// @brief Multiuser alternating design: robust SOCP for the transmit vector
/// and penalized proximal-gradient steps for the reflection vector.

#pragma once

#include "irs/cone.hpp"
#include "irs/robust.hpp"

#include <random>
#include <string>
#include <vector>

namespace irs {

struct MultiuserOptions {
  double lambda = 1.0;  ///< penalty weight on ||theta||^2 - N
  double beta = 2.0;    ///< proximal step parameter
  double eps_inner = 1e-4;
  double eps_outer = 1e-4;
  int max_outer = 100;
  int max_inner = 50;
  int max_redraws = 10;
  int bits = 0;  ///< 0 = continuous phases
  cone::SolveOptions solver;
};

struct TransmitSolution {
  RVector x;
  double amplitude = 0.0;  ///< ||x||
  double power = 0.0;      ///< ||x||^2 [W]
  bool feasible = false;
  cone::SolveStatus status = cone::SolveStatus::kNumericalFailure;
};

/// Minimum-norm transmit vector meeting every worst-case CIR constraint at a
/// fixed theta.
TransmitSolution solve_transmit(const RVector& theta, const RobustInstance& instance,
                                const cone::SolveOptions& options = {});

/// Sum of worst-case CIR slacks with the amplitude frozen:
///     f(theta) = sum_{k,i} (theta^T D Hbar x - delta P ||D^T theta||) + const.
/// The constant collects the direct-link terms.
double pgd_objective(const RVector& theta, const RVector& x, double amplitude, const RobustInstance& instance);

/// g(theta) = ||theta||^2 - N; zero on the unit-modulus set, negative inside.
double modulus_penalty(const RVector& theta);

struct PgdResult {
  RVector theta;
  std::vector<double> objective;  ///< f + lambda g, starting point first
  int iterations = 0;
  bool solver_failed = false;
};

/// Proximal ascent on f + lambda g over the worst-case constraints at
/// (x, amplitude) and the relaxed modulus set (unit disk, or the 2^bits-gon
/// hull when bits > 0).
PgdResult pgd_phase_update(const RobustInstance& instance, const RVector& x, double amplitude,
                           const RVector& theta_start, const MultiuserOptions& options);

enum class MultiuserStatus { kConverged, kMaxIterations, kNoFeasibleStart, kSolverFailure };

std::string to_string(MultiuserStatus status);

struct MultiuserSolution {
  MultiuserStatus status = MultiuserStatus::kNoFeasibleStart;
  RVector theta;  ///< reported design, exactly unit modulus (or in the discrete set)
  RVector x;
  double power = 0.0;  ///< ||x||^2 of the reported design [W]
  std::vector<double> power_trace;                  ///< per outer iteration [W]
  std::vector<std::vector<double>> inner_objective;  ///< per outer iteration
  double modulus_deviation = 0.0;  ///< before the final projection
  bool used_fallback = false;      ///< reported design is the initial point
  int outer_iterations = 0;
  int redraws = 0;
  RVector theta_start;
  std::vector<double> margins;
  double wall_time_ms = 0.0;

  bool ok() const { return status == MultiuserStatus::kConverged || status == MultiuserStatus::kMaxIterations; }
};

/// Alternating design from a given start. theta0 must be unit modulus (or in
/// the discrete set when options.bits > 0).
MultiuserSolution ao_multiuser(const RobustInstance& instance, const RVector& theta0,
                               const MultiuserOptions& options = {});

/// Alternating design from random starts, re-drawn while the transmit step is
/// infeasible.
MultiuserSolution ao_multiuser(const RobustInstance& instance, std::mt19937_64& rng,
                               const MultiuserOptions& options = {});

/// Finite-resolution variant started from the rounded continuous design
/// theta_continuous. Falls back to random discrete starts when that start is
/// infeasible or theta_continuous is empty.
MultiuserSolution ao_multiuser_discrete(const RobustInstance& instance, int bits, const RVector& theta_continuous,
                                        std::mt19937_64& rng, MultiuserOptions options = {});

/// As above, computing the continuous design first.
MultiuserSolution ao_multiuser_discrete(const RobustInstance& instance, int bits, std::mt19937_64& rng,
                                        MultiuserOptions options = {});

/// Baseline: random phases (re-drawn while infeasible) and the transmit step.
MultiuserSolution random_phase_design(const RobustInstance& instance, std::mt19937_64& rng,
                                      const MultiuserOptions& options = {});

/// Discrete phase set {exp(j(2 pi m / 2^B + pi / 2^B))}.
std::vector<cdouble> discrete_phase_set(int bits);

/// Hull of the discrete set as rows n^T z <= bound (one row per edge).
/// For bits = 1 the hull is a segment and the rows describe its supporting
/// lines; callers treat that case as Re = 0 and |Im| <= 1.
struct PolygonHull {
  Eigen::Matrix<double, Eigen::Dynamic, 2> normals;
  double bound = 1.0;
};
PolygonHull polygon_hull(int bits);

/// Per-element nearest point of the discrete set.
RVector round_to_discrete(const RVector& theta, int bits);

/// Random lifted vector with entries drawn from the discrete set
/// (continuous phases when bits = 0).
RVector random_start(int n, int bits, std::mt19937_64& rng);

}  // namespace irs
