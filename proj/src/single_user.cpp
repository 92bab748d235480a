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

#include "irs/single_user.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace irs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

RVector apply_j(const RVector& v) {
  const Eigen::Index n = v.size() / 2;
  RVector out(2 * n);
  out.head(n) = -v.tail(n);
  out.tail(n) = v.head(n);
  return out;
}

// ||g|| for theta
double gain(const RobustInstance& instance, const RVector& theta) {
  return effective_row(theta, instance.users.front(), 0).norm();
}

}  // namespace

void require_single_user_bpsk(const RobustInstance& instance) {
  if (instance.users.size() != 1) throw std::invalid_argument("single-user design needs exactly one user");
  const auto& u = instance.users.front();
  if (u.cir.size() != 1) throw std::invalid_argument("single-user design needs a one-row CIR (BPSK)");
  if (u.has_direct()) throw std::invalid_argument("single-user design does not model direct links");
  if (!(u.xi(0) > 0.0)) throw std::invalid_argument("single-user design needs a positive threshold");
}

RMatrix bpsk_gram(const RobustInstance& instance) {
  require_single_user_bpsk(instance);
  const auto& u = instance.users.front();
  const RMatrix dh = cir_row_matrix(u.cir.row(0), instance.n) * u.channel;
  return dh * dh.transpose();
}

double closed_form_amplitude(const RobustInstance& instance, const RVector& theta) {
  require_single_user_bpsk(instance);
  const auto& u = instance.users.front();
  const double denom = gain(instance, theta) - robust_coefficient(theta, u, 0);
  return denom > 0.0 ? u.xi(0) / denom : kInf;
}

RVector mrt_transmit(const RobustInstance& instance, const RVector& theta) {
  const RVector g = effective_row(theta, instance.users.front(), 0);
  const double p = closed_form_amplitude(instance, theta);
  if (!std::isfinite(p)) return RVector::Zero(g.size());
  return p * g / g.norm();
}

int numerical_rank(const RMatrix& psd, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(psd, Eigen::EigenvaluesOnly);
  const RVector ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rel_tol * top) ++r;
  return r;
}

RMatrix rank_reduce(const RMatrix& theta, double pair_tol, double rank_tol) {
  RMatrix cur = 0.5 * (theta + theta.transpose());
  for (;;) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(cur);
    const RVector ev = es.eigenvalues();
    const RMatrix& vecs = es.eigenvectors();
    const double top = ev.maxCoeff();
    std::vector<Eigen::Index> pos;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > rank_tol * top) pos.push_back(i);
    if (pos.size() < 2) return cur;

    bool reduced = false;
    for (Eigen::Index i : pos) {
      RMatrix others(cur.rows(), static_cast<Eigen::Index>(pos.size()) - 1);
      Eigen::Index c = 0;
      for (Eigen::Index j : pos)
        if (j != i) others.col(c++) = vecs.col(j);
      const RVector partner = apply_j(vecs.col(i));
      const double residual = (partner - others * (others.transpose() * partner)).norm();
      if (residual < pair_tol) {
        RMatrix next = cur;
        next.noalias() -= ev(i) * vecs.col(i) * vecs.col(i).transpose();
        next.noalias() += ev(i) * partner * partner.transpose();
        cur = 0.5 * (next + next.transpose());
        reduced = true;
        break;
      }
    }
    if (!reduced) return cur;
  }
}

RVector random_phases(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  RVector phases(n);
  for (int i = 0; i < n; ++i) phases(i) = u(rng);
  return lift_phase_vector(phases).lifted;
}

SdrSolution sdr_solve(const RobustInstance& instance, std::mt19937_64& rng, const SdrOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  require_single_user_bpsk(instance);
  const int n = instance.n;
  const int dim = 2 * n;
  const RMatrix w = bpsk_gram(instance);
  SdrSolution sol;

  // Dual of the relaxation: min sum y  s.t.  sum_n y_n E_n - W >= 0, where
  // E_n = B_n^T B_n. The PSD multiplier is the relaxed phase matrix.
  cone::ConeProgram prog(n);
  prog.objective().setOnes();
  RMatrix map = RMatrix::Zero(cone::svec_size(dim), n);
  for (int i = 0; i < n; ++i) {
    RMatrix e = RMatrix::Zero(dim, dim);
    e(i, i) = 1.0;
    e(i + n, i + n) = 1.0;
    map.col(i) = cone::svec(e);
  }
  prog.add_psd(dim, map, -cone::svec(w));
  const auto rep = cone::solve(prog, options.solver);
  sol.status = rep.status;
  if (!rep.ok()) {
    sol.wall_time_ms = elapsed_ms(t0);
    return sol;
  }
  sol.relaxed = cone::smat(rep.duals.front(), dim);
  sol.sdp_objective = rep.objective;
  sol.rank_relaxed = numerical_rank(sol.relaxed);
  sol.reduced = rank_reduce(sol.relaxed);
  sol.rank_reduced = numerical_rank(sol.reduced);

  const auto& u = instance.users.front();
  const double rho = u.delta * u.cir.row(0).norm() * std::sqrt(static_cast<double>(n));
  const double root = std::sqrt(std::max(sol.sdp_objective, 0.0));
  sol.amplitude_lower_bound = root > rho ? u.xi(0) / (root - rho) : kInf;

  Eigen::SelfAdjointEigenSolver<RMatrix> es(sol.reduced);
  const RVector ev = es.eigenvalues().cwiseMax(0.0);
  const RMatrix factor = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();

  RVector best = project_unit_modulus(es.eigenvectors().col(dim - 1));
  double best_gain = gain(instance, best);
  if (sol.rank_reduced > 1) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RVector r(dim);
    for (int d = 0; d < options.draws; ++d) {
      for (int i = 0; i < dim; ++i) r(i) = normal(rng);
      const RVector cand = project_unit_modulus(factor * r);
      const double g = gain(instance, cand);
      if (g > best_gain) {
        best_gain = g;
        best = cand;
      }
    }
    sol.draws = options.draws;
  }
  sol.theta = best;
  sol.amplitude = closed_form_amplitude(instance, best);
  sol.feasible = std::isfinite(sol.amplitude);
  sol.x = mrt_transmit(instance, best);
  sol.power = sol.feasible ? sol.amplitude * sol.amplitude : kInf;
  sol.wall_time_ms = elapsed_ms(t0);
  return sol;
}

AoTrace ao_solve(const RobustInstance& instance, const RVector& theta0, const AoOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  require_single_user_bpsk(instance);
  const auto& u = instance.users.front();
  const RMatrix dh = cir_row_matrix(u.cir.row(0), instance.n) * u.channel;
  AoTrace trace;
  RVector theta = project_unit_modulus(theta0);
  double prev = kInf;
  for (int it = 0; it < options.max_iter; ++it) {
    const double p = closed_form_amplitude(instance, theta);
    if (!std::isfinite(p)) break;
    const RVector x = mrt_transmit(instance, theta);
    trace.power.push_back(p * p);
    trace.theta = theta;
    trace.x = x;
    trace.iterations = it + 1;
    trace.feasible = true;
    if (std::isfinite(prev) && (prev - p) / prev < options.eps) {
      trace.converged = true;
      break;
    }
    prev = p;
    // element-wise alignment with D Hbar x maximizes theta^T D Hbar x
    const RVector q = dh * x;
    theta = project_unit_modulus(q);
  }
  trace.wall_time_ms = elapsed_ms(t0);
  return trace;
}

}  // namespace irs
