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

// Reference computations written directly from the complex-valued model.
// They deliberately avoid the library's lifted algebra.

#pragma once

#include "irs/multiuser.hpp"
#include "irs/robust.hpp"
#include "irs/scenario.hpp"
#include "irs/single_user.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using irs::cdouble;
using irs::CMatrix;
using irs::CVector;
using irs::RMatrix;
using irs::RVector;

inline CMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cdouble(g(rng), g(rng));
  return m;
}

inline RVector random_real(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RVector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline RVector uniform_phases(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  RVector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline RMatrix kron(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// D(a) = ((I_2 kron a^T) M) kron I_N with M = [[1,0],[0,1],[0,-1],[1,0]].
inline RMatrix cir_matrix(const Eigen::Vector2d& a, int n) {
  RMatrix m(4, 2);
  m << 1, 0, 0, 1, 0, -1, 1, 0;
  const RMatrix left = kron(RMatrix::Identity(2, 2), RMatrix(a.transpose()));
  return kron(left * m, RMatrix::Identity(n, n));
}

// Complex received sample sum_n exp(j phi_n) (H x)_n + hd^T x.
inline cdouble received(const RVector& phases, const CMatrix& h, const CVector& x, const CVector& hd = CVector()) {
  const CVector hx = h * x;
  cdouble y = 0.0;
  for (Eigen::Index n = 0; n < hx.size(); ++n) y += std::polar(1.0, phases(n)) * hx(n);
  if (hd.size() > 0) y += (hd.transpose() * x).value();
  return y;
}

// Lifted vector [Re; Im] written out by hand.
inline RVector stack(const CVector& v) {
  RVector out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = v(i).real();
    out(i + v.size()) = v(i).imag();
  }
  return out;
}

inline CVector unstack(const RVector& v) {
  const Eigen::Index n = v.size() / 2;
  CVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = cdouble(v(i), v(i + n));
  return out;
}

inline RVector phases_of(const RVector& lifted) {
  const Eigen::Index n = lifted.size() / 2;
  RVector p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = std::atan2(lifted(i + n), lifted(i));
  return p;
}

// Single-user BPSK amplitude xi / (2 |sum_n e^{j phi_n} h_n| ... ) evaluated
// in the complex domain: the effective row norm is 2 ||h_eff|| where
// h_eff^T = sum_n e^{j phi_n} H(n, :), robust term 2 delta sqrt(N).
inline double bpsk_amplitude(const RVector& phases, const CMatrix& h, double xi, double delta) {
  CVector eff = CVector::Zero(h.cols());
  for (Eigen::Index n = 0; n < h.rows(); ++n) eff += std::polar(1.0, phases(n)) * h.row(n).transpose();
  const double denom = 2.0 * eff.norm() - 2.0 * delta * std::sqrt(static_cast<double>(h.rows()));
  return denom > 0.0 ? xi / denom : std::numeric_limits<double>::infinity();
}

// Best amplitude over a uniform grid of phases for N = 2 (first phase fixed
// by the global rotation invariance is NOT assumed: both phases are swept).
inline double grid_bpsk_amplitude(const CMatrix& h, double xi, double delta, int steps) {
  double best = std::numeric_limits<double>::infinity();
  RVector ph(2);
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j) {
      ph << 2.0 * std::numbers::pi * i / steps, 2.0 * std::numbers::pi * j / steps;
      best = std::min(best, bpsk_amplitude(ph, h, xi, delta));
    }
  return best;
}

// Margin a^T [Re y; Im y] - xi of a complex received sample.
inline double margin(const Eigen::Vector2d& a, cdouble y, double xi) {
  return a(0) * y.real() + a(1) * y.imag() - xi;
}

inline double dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

}  // namespace oracle
