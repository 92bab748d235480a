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

#include "irs/lift.hpp"

#include <cmath>

namespace irs {

RMatrix lift(const CMatrix& u) {
  const Eigen::Index m = u.rows();
  const Eigen::Index n = u.cols();
  RMatrix out(2 * m, 2 * n);
  out.topLeftCorner(m, n) = u.real();
  out.topRightCorner(m, n) = -u.imag();
  out.bottomLeftCorner(m, n) = u.imag();
  out.bottomRightCorner(m, n) = u.real();
  return out;
}

RVector lift_vector(const CVector& v) {
  RVector out(2 * v.size());
  out << v.real(), v.imag();
  return out;
}

CVector unlift_vector(const RVector& v) {
  const Eigen::Index n = v.size() / 2;
  CVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = cdouble(v(i), v(i + n));
  return out;
}

PhaseVector lift_phase_vector(const RVector& phases) {
  PhaseVector pv;
  const Eigen::Index n = phases.size();
  pv.phases = phases;
  pv.multipliers.resize(n);
  pv.lifted.resize(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pv.multipliers(i) = std::polar(1.0, phases(i));
    pv.lifted(i) = std::cos(phases(i));
    pv.lifted(i + n) = std::sin(phases(i));
  }
  return pv;
}

RVector phases_from_lifted(const RVector& lifted) {
  const Eigen::Index n = lifted.size() / 2;
  RVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::atan2(lifted(i + n), lifted(i));
  return phases;
}

CVector multipliers_from_lifted(const RVector& lifted) { return unlift_vector(lifted); }

RMatrix phase_operator(const RVector& lifted) {
  const Eigen::Index n = lifted.size() / 2;
  // lift of the 1 x N row of multipliers
  RMatrix theta(2, 2 * n);
  theta.row(0) << lifted.head(n).transpose(), -lifted.tail(n).transpose();
  theta.row(1) << lifted.tail(n).transpose(), lifted.head(n).transpose();
  return theta;
}

Eigen::Matrix2d cir_row_core(const Eigen::Vector2d& a) {
  Eigen::Matrix2d c;
  c << a(0), a(1), a(1), -a(0);
  return c;
}

RMatrix cir_row_matrix(const Eigen::Vector2d& a, int n_elements) {
  Eigen::Matrix<double, 2, 4> ia = Eigen::Matrix<double, 2, 4>::Zero();
  ia.block<1, 2>(0, 0) = a.transpose();
  ia.block<1, 2>(1, 2) = a.transpose();
  Eigen::Matrix<double, 4, 2> pattern;
  pattern << 1, 0, 0, 1, 0, -1, 1, 0;
  const Eigen::Matrix2d core = ia * pattern;
  const RMatrix eye = RMatrix::Identity(n_elements, n_elements);
  RMatrix d(2 * n_elements, 2 * n_elements);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) d.block(r * n_elements, c * n_elements, n_elements, n_elements) = core(r, c) * eye;
  return d;
}

RVector apply_cir_row_transpose(const Eigen::Vector2d& a, const RVector& lifted) {
  const Eigen::Index n = lifted.size() / 2;
  // C(a) is symmetric, so D^T theta = (C kron I) theta.
  RVector out(2 * n);
  out.head(n) = a(0) * lifted.head(n) + a(1) * lifted.tail(n);
  out.tail(n) = a(1) * lifted.head(n) - a(0) * lifted.tail(n);
  return out;
}

RMatrix element_selector(int n, int n_elements) {
  RMatrix b = RMatrix::Zero(2, 2 * n_elements);
  b(0, n) = 1.0;
  b(1, n + n_elements) = 1.0;
  return b;
}

double max_modulus_deviation(const RVector& lifted) {
  const Eigen::Index n = lifted.size() / 2;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(std::hypot(lifted(i), lifted(i + n)) - 1.0));
  return worst;
}

RVector project_unit_modulus(const RVector& lifted) {
  const Eigen::Index n = lifted.size() / 2;
  RVector out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::hypot(lifted(i), lifted(i + n));
    if (r > 0.0) {
      out(i) = lifted(i) / r;
      out(i + n) = lifted(i + n) / r;
    } else {
      out(i) = 1.0;
      out(i + n) = 0.0;
    }
  }
  return out;
}

}  // namespace irs
