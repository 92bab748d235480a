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

/// @file robust.hpp
/// @brief Worst-case CIR margins over a Frobenius ball of channel errors.
///
/// For user k and CIR row i with direction a, the lifted received signal is
/// Theta (Hbar + Dbar) x + (Hd + Ddbar) x. Its projection on a must exceed
/// xi = sqrt(gamma) * b for every error with ||Dbar||_F <= delta and
/// ||Ddbar||_F <= delta_d. The worst case is
///
///     margin = c^T x - ||x|| (delta ||D^T theta|| + delta_d ||a||) - xi,
///     c      = Hbar^T D^T theta + Hd^T a.
///
/// Since D = C(a) kron I with C(a)^2 = ||a||^2 I, ||D^T theta|| equals
/// ||a|| ||theta|| for any theta.

#pragma once

#include "irs/constellation.hpp"
#include "irs/scenario.hpp"

#include <vector>

namespace irs {

struct RobustUser {
  RMatrix channel;  ///< lifted estimate, 2N x 2M
  CirSpec cir;
  RVector xi;       ///< sqrt(gamma) * b per row
  double delta = 0.0;
  RMatrix direct;   ///< lifted direct row, 2 x 2M; empty without direct links
  double delta_direct = 0.0;

  bool has_direct() const { return direct.size() > 0; }
};

struct RobustInstance {
  int n = 0;  ///< IRS elements
  int m = 0;  ///< BS antennas
  std::vector<RobustUser> users;

  int num_rows() const;
};

/// Instance for one symbol tuple. Channels are the estimates in `channels`;
/// direct links are included when present and `use_direct` is set.
RobustInstance build_instance(const ChannelSet& channels, const ScenarioConfig& config,
                              const Constellation& constellation, const std::vector<int>& symbols,
                              bool use_direct = true);

/// Same channels, different symbols.
void set_symbols(RobustInstance& instance, const ScenarioConfig& config, const Constellation& constellation,
                 const std::vector<int>& symbols);

/// c = Hbar^T D^T theta + Hd^T a for row i of user k.
RVector effective_row(const RVector& theta, const RobustUser& user, int row);

/// delta ||a|| ||theta|| + delta_d ||a||, the coefficient of ||x||.
double robust_coefficient(const RVector& theta, const RobustUser& user, int row);

/// Closed-form worst-case margin. Throws std::invalid_argument on dimension
/// mismatch.
double worst_case_margin(const RVector& theta, const RVector& x, const RobustInstance& instance, int user, int row);

/// All margins, user-major.
std::vector<double> worst_case_margins(const RVector& theta, const RVector& x, const RobustInstance& instance);

struct FeasibilityCheck {
  double worst_margin = 0.0;
  int worst_user = -1;
  int worst_row = -1;
  bool feasible = false;
};

FeasibilityCheck check_feasible(const RVector& theta, const RVector& x, const RobustInstance& instance,
                                double tol = 1e-6);

/// Margin of one row under a specific lifted error (2N x 2M) and lifted
/// direct error (2 x 2M, may be empty).
double perturbed_margin(const RVector& theta, const RVector& x, const RobustUser& user, int row,
                        const RMatrix& error, const RMatrix& direct_error = RMatrix());

/// Lifted received signal Theta * channel * x (+ direct * x).
Eigen::Vector2d lifted_received(const RVector& theta, const RVector& x, const RMatrix& channel,
                                const RMatrix& direct = RMatrix());

/// Largest worst-case CIR slack per unit transmit amplitude:
///     max_{||x|| <= 1} min_{k,i} (c^T x - robust coefficient).
/// A non-positive value means no transmit power can satisfy the PSK
/// constraints at this theta.
double robust_margin_capacity(const RVector& theta, const RobustInstance& instance);

}  // namespace irs
