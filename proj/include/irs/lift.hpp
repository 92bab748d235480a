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

#include <Eigen/Dense>

#include <complex>

namespace irs {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Real lift of a complex matrix: [[Re U, -Im U], [Im U, Re U]] (2m x 2n).
RMatrix lift(const CMatrix& u);

/// Stacked real/imaginary parts of a complex vector: [Re v; Im v].
RVector lift_vector(const CVector& v);

/// Inverse of lift_vector.
CVector unlift_vector(const RVector& v);

/// IRS reflection state. Element n multiplies its incident signal by
/// multipliers(n) = exp(j * phases(n)); `lifted` is [cos(phases); sin(phases)].
struct PhaseVector {
  RVector phases;
  CVector multipliers;
  RVector lifted;
};

PhaseVector lift_phase_vector(const RVector& phases);

/// Phase angles recovered from a lifted reflection vector (atan2 per element).
RVector phases_from_lifted(const RVector& lifted);

/// Complex multipliers from a lifted reflection vector (modulus not enforced).
CVector multipliers_from_lifted(const RVector& lifted);

/// 2 x 2N operator Theta with Theta * lift(H) * x_lifted equal to the lifted
/// received signal sum_n multiplier_n * (H x)_n.
RMatrix phase_operator(const RVector& lifted);

/// The 2 x 2 core C(a) = [[a0, a1], [a1, -a0]]; D(a) = C(a) kron I_N.
Eigen::Matrix2d cir_row_core(const Eigen::Vector2d& a);

/// Dense D(a) = ((I_2 kron a^T) * [[1,0],[0,1],[0,-1],[1,0]]) kron I_N.
RMatrix cir_row_matrix(const Eigen::Vector2d& a, int n_elements);

/// D(a)^T * theta computed from the Kronecker structure without forming D.
RVector apply_cir_row_transpose(const Eigen::Vector2d& a, const RVector& lifted);

/// Selector B_n (2 x 2N) picking entries n and n + N (0-based n).
RMatrix element_selector(int n, int n_elements);

/// max_n | ||B_n theta|| - 1 |
double max_modulus_deviation(const RVector& lifted);

/// Project every element pair (theta_n, theta_{n+N}) to the unit circle.
/// Zero pairs map to phase 0.
RVector project_unit_modulus(const RVector& lifted);

}  // namespace irs
