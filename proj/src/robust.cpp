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

#include "irs/robust.hpp"

#include "irs/cone.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irs {
namespace {

void check_dims(const RVector& theta, const RVector& x, const RobustInstance& instance) {
  if (theta.size() != 2 * instance.n) throw std::invalid_argument("theta has wrong length");
  if (x.size() != 2 * instance.m) throw std::invalid_argument("x has wrong length");
}

}  // namespace

int RobustInstance::num_rows() const {
  int total = 0;
  for (const auto& u : users) total += u.cir.size();
  return total;
}

RobustInstance build_instance(const ChannelSet& channels, const ScenarioConfig& config,
                              const Constellation& constellation, const std::vector<int>& symbols,
                              bool use_direct) {
  if (static_cast<int>(symbols.size()) != config.k) throw std::invalid_argument("one symbol per user required");
  RobustInstance inst;
  inst.n = config.n;
  inst.m = config.m;
  for (int k = 0; k < config.k; ++k) {
    RobustUser u;
    u.channel = lift(channels.estimate[static_cast<std::size_t>(k)]);
    u.delta = config.delta_for(k);
    if (use_direct && channels.has_direct()) {
      u.direct = lift(channels.direct_estimate[static_cast<std::size_t>(k)].transpose());
      u.delta_direct = config.delta_direct_for(k);
    }
    inst.users.push_back(std::move(u));
  }
  set_symbols(inst, config, constellation, symbols);
  return inst;
}

void set_symbols(RobustInstance& instance, const ScenarioConfig& config, const Constellation& constellation,
                 const std::vector<int>& symbols) {
  for (std::size_t k = 0; k < instance.users.size(); ++k) {
    auto& u = instance.users[k];
    u.cir = constellation.cir(symbols.at(k));
    u.xi = std::sqrt(config.gamma_linear(static_cast<int>(k))) * u.cir.offsets;
  }
}

RVector effective_row(const RVector& theta, const RobustUser& user, int row) {
  const Eigen::Vector2d a = user.cir.row(row);
  RVector c = user.channel.transpose() * apply_cir_row_transpose(a, theta);
  if (user.has_direct()) c += user.direct.transpose() * a;
  return c;
}

double robust_coefficient(const RVector& theta, const RobustUser& user, int row) {
  const double an = user.cir.row(row).norm();
  double rho = user.delta * an * theta.norm();
  if (user.has_direct()) rho += user.delta_direct * an;
  return rho;
}

double worst_case_margin(const RVector& theta, const RVector& x, const RobustInstance& instance, int user,
                         int row) {
  check_dims(theta, x, instance);
  const auto& u = instance.users.at(static_cast<std::size_t>(user));
  if (row < 0 || row >= u.cir.size()) throw std::invalid_argument("CIR row out of range");
  return effective_row(theta, u, row).dot(x) - x.norm() * robust_coefficient(theta, u, row) - u.xi(row);
}

std::vector<double> worst_case_margins(const RVector& theta, const RVector& x, const RobustInstance& instance) {
  std::vector<double> out;
  for (std::size_t k = 0; k < instance.users.size(); ++k)
    for (int i = 0; i < instance.users[k].cir.size(); ++i)
      out.push_back(worst_case_margin(theta, x, instance, static_cast<int>(k), i));
  return out;
}

FeasibilityCheck check_feasible(const RVector& theta, const RVector& x, const RobustInstance& instance,
                                double tol) {
  FeasibilityCheck check;
  check.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < instance.users.size(); ++k)
    for (int i = 0; i < instance.users[k].cir.size(); ++i) {
      const double m = worst_case_margin(theta, x, instance, static_cast<int>(k), i);
      if (m < check.worst_margin) {
        check.worst_margin = m;
        check.worst_user = static_cast<int>(k);
        check.worst_row = i;
      }
    }
  check.feasible = check.worst_margin >= -tol;
  return check;
}

Eigen::Vector2d lifted_received(const RVector& theta, const RVector& x, const RMatrix& channel,
                                const RMatrix& direct) {
  Eigen::Vector2d y = phase_operator(theta) * (channel * x);
  if (direct.size() > 0) y += direct * x;
  return y;
}

double perturbed_margin(const RVector& theta, const RVector& x, const RobustUser& user, int row,
                        const RMatrix& error, const RMatrix& direct_error) {
  const RMatrix channel = user.channel + error;
  RMatrix direct;
  if (user.has_direct()) direct = direct_error.size() > 0 ? RMatrix(user.direct + direct_error) : user.direct;
  return user.cir.row(row).dot(lifted_received(theta, x, channel, direct)) - user.xi(row);
}

double robust_margin_capacity(const RVector& theta, const RobustInstance& instance) {
  // variables (x, s): maximize s s.t. c^T x - rho - s >= 0, ||x|| <= 1
  const int nx = 2 * instance.m;
  cone::ConeProgram prog(nx + 1);
  prog.objective()(nx) = -1.0;
  RMatrix ball = RMatrix::Zero(nx + 1, nx + 1);
  ball.bottomLeftCorner(nx, nx).setIdentity();
  RVector ball_off = RVector::Zero(nx + 1);
  ball_off(0) = 1.0;
  prog.add_second_order(ball, ball_off);
  const int rows = instance.num_rows();
  RMatrix lin(rows, nx + 1);
  RVector off(rows);
  int r = 0;
  for (const auto& u : instance.users)
    for (int i = 0; i < u.cir.size(); ++i, ++r) {
      lin.row(r).head(nx) = effective_row(theta, u, i).transpose();
      lin(r, nx) = -1.0;
      off(r) = -robust_coefficient(theta, u, i);
    }
  prog.add_nonnegative(lin, off);
  const auto rep = cone::solve(prog);
  if (!rep.ok()) return -std::numeric_limits<double>::infinity();
  return -rep.objective;
}

}  // namespace irs
