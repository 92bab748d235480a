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

/// @file cone.hpp
/// @brief Linear conic programs over products of zero, nonnegative,
/// second-order and positive-semidefinite cones.
///
/// A program is
///
///     minimize    c^T x
///     subject to  F_i x + g_i in K_i,   i = 1..m
///
/// where each K_i is one of
///  - the zero cone {0} (equality constraints),
///  - the nonnegative orthant,
///  - the second-order cone {(t, u) : t >= ||u||_2},
///  - the PSD cone of p x p symmetric matrices, stored as svec (lower
///    triangle, column-major, off-diagonal entries scaled by sqrt(2) so that
///    svec(X)^T svec(Y) = tr(XY)).
///
/// The solver is a primal-dual interior-point method on the homogeneous
/// self-dual embedding with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector steps. It works with dense linear algebra and is
/// meant for problems with up to a few hundred variables.

#pragma once

#include "irs/lift.hpp"

#include <string>
#include <vector>

namespace irs::cone {

enum class ConeKind { kZero, kNonnegative, kSecondOrder, kPsd };

struct Constraint {
  ConeKind kind;
  RMatrix map;     ///< F_i
  RVector offset;  ///< g_i
  int psd_size = 0;
};

class ConeProgram {
 public:
  explicit ConeProgram(int num_vars);

  int num_vars() const { return num_vars_; }
  RVector& objective() { return objective_; }
  const RVector& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Each add_* returns the constraint index; duals are reported per index.
  int add_zero(RMatrix map, RVector offset);
  int add_nonnegative(RMatrix map, RVector offset);
  int add_second_order(RMatrix map, RVector offset);
  int add_psd(int size, RMatrix map, RVector offset);

  /// Largest violation of any cone membership at x (0 when feasible).
  double max_violation(const RVector& x) const;

 private:
  int add(ConeKind kind, RMatrix map, RVector offset, int psd_size);

  int num_vars_;
  RVector objective_;
  std::vector<Constraint> constraints_;
};

enum class SolveStatus {
  kOptimal,
  kInaccurate,  ///< stalled, but within the reduced tolerances
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
};

std::string to_string(SolveStatus status);

struct SolveOptions {
  double feastol = 1e-8;
  double abstol = 1e-8;  ///< gap <= abstol * (1 + |objective|)
  double reduced_tol = 1e-6;
  int max_iter = 100;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kNumericalFailure;
  RVector x;
  double objective = 0.0;
  double max_violation = 0.0;
  int iterations = 0;
  double wall_time_ms = 0.0;
  /// Dual multiplier of every constraint, in add order. For F x + g in K the
  /// dual z lies in K (the zero cone's dual is free) and sum_i F_i^T z_i = c.
  std::vector<RVector> duals;

  bool ok() const { return status == SolveStatus::kOptimal || status == SolveStatus::kInaccurate; }
};

SolveReport solve(const ConeProgram& program, const SolveOptions& options = {});

/// svec / smat for symmetric matrices.
RVector svec(const RMatrix& m);
RMatrix smat(const RVector& v, int size);
int svec_size(int size);

}  // namespace irs::cone
