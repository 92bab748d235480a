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

#include "irs/multiuser.hpp"

#include "irs/single_user.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace irs {
namespace {

constexpr double kPi = std::numbers::pi;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Linear part of one worst-case slack in theta: q = D Hbar x.
struct SlackTerms {
  std::vector<RVector> q;        ///< per (k, i)
  std::vector<double> robust;    ///< delta_k P ||a||, coefficient of ||theta||
  std::vector<double> constant;  ///< a^T Hd x - delta_d P ||a|| - xi
};

SlackTerms slack_terms(const RobustInstance& instance, const RVector& x, double amplitude) {
  SlackTerms t;
  for (const auto& u : instance.users) {
    const RVector hx = u.channel * x;
    const RVector dx = u.has_direct() ? RVector(u.direct * x) : RVector();
    for (int i = 0; i < u.cir.size(); ++i) {
      const Eigen::Vector2d a = u.cir.row(i);
      t.q.push_back(apply_cir_row_transpose(a, hx));
      t.robust.push_back(u.delta * amplitude * a.norm());
      double c = -u.xi(i);
      if (u.has_direct()) c += a.dot(dx.head<2>()) - u.delta_direct * amplitude * a.norm();
      t.constant.push_back(c);
    }
  }
  return t;
}

double penalized(const RVector& theta, const SlackTerms& t, double lambda) {
  double f = 0.0;
  const double nrm = theta.norm();
  for (std::size_t r = 0; r < t.q.size(); ++r) f += t.q[r].dot(theta) - t.robust[r] * nrm + t.constant[r];
  return f + lambda * modulus_penalty(theta);
}

int bits_order(int bits) { return 1 << bits; }

}  // namespace

std::string to_string(MultiuserStatus status) {
  switch (status) {
    case MultiuserStatus::kConverged: return "converged";
    case MultiuserStatus::kMaxIterations: return "max-iterations";
    case MultiuserStatus::kNoFeasibleStart: return "no-feasible-start";
    case MultiuserStatus::kSolverFailure: return "solver-failure";
  }
  return "unknown";
}

TransmitSolution solve_transmit(const RVector& theta, const RobustInstance& instance,
                                const cone::SolveOptions& options) {
  if (theta.size() != 2 * instance.n) throw std::invalid_argument("theta has wrong length");
  const int nx = 2 * instance.m;
  // variables (x, t): min t  s.t.  t >= ||x||,  c^T x - rho t >= xi
  cone::ConeProgram prog(nx + 1);
  prog.objective()(nx) = 1.0;
  RMatrix soc = RMatrix::Zero(nx + 1, nx + 1);
  soc(0, nx) = 1.0;
  soc.bottomLeftCorner(nx, nx).setIdentity();
  prog.add_second_order(soc, RVector::Zero(nx + 1));
  const int rows = instance.num_rows();
  RMatrix lin(rows, nx + 1);
  RVector off(rows);
  int r = 0;
  for (const auto& u : instance.users)
    for (int i = 0; i < u.cir.size(); ++i, ++r) {
      lin.row(r).head(nx) = effective_row(theta, u, i).transpose();
      lin(r, nx) = -robust_coefficient(theta, u, i);
      off(r) = -u.xi(i);
    }
  prog.add_nonnegative(lin, off);

  TransmitSolution sol;
  const auto rep = cone::solve(prog, options);
  sol.status = rep.status;
  if (!rep.ok()) return sol;
  sol.x = rep.x.head(nx);
  sol.amplitude = sol.x.norm();
  sol.power = sol.amplitude * sol.amplitude;
  sol.feasible = true;
  return sol;
}

double modulus_penalty(const RVector& theta) { return theta.squaredNorm() - static_cast<double>(theta.size() / 2); }

double pgd_objective(const RVector& theta, const RVector& x, double amplitude, const RobustInstance& instance) {
  return penalized(theta, slack_terms(instance, x, amplitude), 0.0);
}

std::vector<cdouble> discrete_phase_set(int bits) {
  if (bits < 1) throw std::invalid_argument("bits must be >= 1");
  const int l = bits_order(bits);
  std::vector<cdouble> out;
  for (int m = 0; m < l; ++m) out.push_back(std::polar(1.0, 2.0 * kPi * m / l + kPi / l));
  return out;
}

PolygonHull polygon_hull(int bits) {
  if (bits < 1) throw std::invalid_argument("bits must be >= 1");
  const int l = bits_order(bits);
  PolygonHull hull;
  hull.normals.resize(l, 2);
  for (int m = 0; m < l; ++m) {
    // outward normal of the edge between points m and m + 1
    const double w = 2.0 * kPi * (m + 1) / l;
    hull.normals(m, 0) = std::cos(w);
    hull.normals(m, 1) = std::sin(w);
  }
  hull.bound = std::cos(kPi / l);
  return hull;
}

RVector round_to_discrete(const RVector& theta, int bits) {
  const Eigen::Index n = theta.size() / 2;
  const int l = bits_order(bits);
  const double step = 2.0 * kPi / l;
  RVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = std::atan2(theta(i + n), theta(i));
    const long m = std::lround((phi - kPi / l) / step);
    phases(i) = step * static_cast<double>(((m % l) + l) % l) + kPi / l;
  }
  return lift_phase_vector(phases).lifted;
}

RVector random_start(int n, int bits, std::mt19937_64& rng) {
  if (bits <= 0) return random_phases(n, rng);
  const int l = bits_order(bits);
  std::uniform_int_distribution<int> pick(0, l - 1);
  RVector phases(n);
  for (int i = 0; i < n; ++i) phases(i) = 2.0 * kPi * pick(rng) / l + kPi / l;
  return lift_phase_vector(phases).lifted;
}

PgdResult pgd_phase_update(const RobustInstance& instance, const RVector& x, double amplitude,
                           const RVector& theta_start, const MultiuserOptions& options) {
  const int n = instance.n;
  const int nt = 2 * n;
  const SlackTerms terms = slack_terms(instance, x, amplitude);
  const std::size_t rows = terms.q.size();

  RVector qsum = RVector::Zero(nt);
  double rsum = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    qsum += terms.q[r];
    rsum += terms.robust[r];
  }
  const bool robust = rsum > 0.0;
  // variables: theta (2N), [u >= ||theta||], r (prox epigraph)
  const int iu = nt;
  const int ir = robust ? nt + 1 : nt;
  const int nv = ir + 1;
  const double inv_beta = 1.0 / options.beta;

  // fixed constraint blocks
  RMatrix slack_map = RMatrix::Zero(static_cast<Eigen::Index>(rows), nv);
  RVector slack_off(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    slack_map.row(ri).head(nt) = terms.q[r].transpose();
    if (robust) slack_map(ri, iu) = -terms.robust[r];
    slack_off(ri) = terms.constant[r];
  }

  PgdResult res;
  RVector theta = theta_start;
  double value = penalized(theta, terms, options.lambda);
  res.objective.push_back(value);

  for (int it = 0; it < options.max_inner; ++it) {
    const RVector anchor = theta + (options.lambda * inv_beta) * 2.0 * theta;

    cone::ConeProgram prog(nv);
    auto& c = prog.objective();
    c.head(nt) = -inv_beta * qsum;
    if (robust) c(iu) = inv_beta * rsum;
    c(ir) = 1.0;

    prog.add_nonnegative(slack_map, slack_off);
    if (robust) {
      RMatrix soc = RMatrix::Zero(nt + 1, nv);
      soc(0, iu) = 1.0;
      soc.block(1, 0, nt, nt).setIdentity();
      prog.add_second_order(soc, RVector::Zero(nt + 1));
    }
    if (options.bits <= 0) {
      for (int e = 0; e < n; ++e) {
        RMatrix soc = RMatrix::Zero(3, nv);
        soc(1, e) = 1.0;
        soc(2, e + n) = 1.0;
        RVector off = RVector::Zero(3);
        off(0) = 1.0;
        prog.add_second_order(soc, off);
      }
    } else if (options.bits == 1) {
      RMatrix eq = RMatrix::Zero(n, nv);
      RMatrix box = RMatrix::Zero(2 * n, nv);
      for (int e = 0; e < n; ++e) {
        eq(e, e) = 1.0;
        box(2 * e, e + n) = -1.0;
        box(2 * e + 1, e + n) = 1.0;
      }
      prog.add_zero(eq, RVector::Zero(n));
      prog.add_nonnegative(box, RVector::Ones(2 * n));
    } else {
      const PolygonHull hull = polygon_hull(options.bits);
      const auto l = hull.normals.rows();
      RMatrix poly = RMatrix::Zero(n * l, nv);
      for (int e = 0; e < n; ++e)
        for (Eigen::Index m = 0; m < l; ++m) {
          poly(e * l + m, e) = -hull.normals(m, 0);
          poly(e * l + m, e + n) = -hull.normals(m, 1);
        }
      prog.add_nonnegative(poly, RVector::Constant(n * l, hull.bound));
    }
    // (r + 1/2, theta - anchor, r - 1/2) in SOC  <=>  ||theta - anchor||^2 <= 2 r
    RMatrix rot = RMatrix::Zero(nt + 2, nv);
    RVector rot_off = RVector::Zero(nt + 2);
    rot(0, ir) = 1.0;
    rot_off(0) = 0.5;
    rot.block(1, 0, nt, nt).setIdentity();
    rot_off.segment(1, nt) = -anchor;
    rot(nt + 1, ir) = 1.0;
    rot_off(nt + 1) = -0.5;
    prog.add_second_order(rot, rot_off);

    const auto rep = cone::solve(prog, options.solver);
    if (!rep.ok()) {
      res.solver_failed = true;
      break;
    }
    const RVector cand = rep.x.head(nt);
    const double cand_value = penalized(cand, terms, options.lambda);
    if (!(cand_value >= value)) break;
    const double gain = cand_value - value;
    theta = cand;
    value = cand_value;
    res.objective.push_back(value);
    res.iterations = it + 1;
    if (gain < options.eps_inner * std::max(std::abs(value), 1e-12)) break;
  }
  res.theta = theta;
  return res;
}

MultiuserSolution ao_multiuser(const RobustInstance& instance, const RVector& theta0,
                               const MultiuserOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  MultiuserSolution sol;
  sol.theta_start = theta0;
  const TransmitSolution start = solve_transmit(theta0, instance, options.solver);
  if (!start.feasible) {
    sol.status = start.status == cone::SolveStatus::kInfeasible ? MultiuserStatus::kNoFeasibleStart
                                                                 : MultiuserStatus::kSolverFailure;
    sol.wall_time_ms = elapsed_ms(t0);
    return sol;
  }

  RVector theta = theta0;
  RVector x = start.x;
  double amp = start.amplitude;
  sol.power_trace.push_back(amp * amp);
  sol.status = MultiuserStatus::kMaxIterations;
  for (int t = 0; t < options.max_outer; ++t) {
    const PgdResult pgd = pgd_phase_update(instance, x, amp, theta, options);
    sol.inner_objective.push_back(pgd.objective);
    const TransmitSolution next = solve_transmit(pgd.theta, instance, options.solver);
    const double prev = amp;
    if (next.feasible && next.amplitude <= amp) {
      theta = pgd.theta;
      x = next.x;
      amp = next.amplitude;
    } else if (!next.feasible) {
      // keep the previous design; the relaxed step is not usable
      sol.outer_iterations = t + 1;
      sol.power_trace.push_back(amp * amp);
      sol.status = MultiuserStatus::kConverged;
      break;
    } else {
      // the previous transmit vector stays feasible for the new phases
      theta = pgd.theta;
    }
    sol.power_trace.push_back(amp * amp);
    sol.outer_iterations = t + 1;
    if ((prev - amp) / prev < options.eps_outer) {
      sol.status = MultiuserStatus::kConverged;
      break;
    }
  }

  sol.modulus_deviation = max_modulus_deviation(theta);
  const RVector final_theta =
      options.bits > 0 ? round_to_discrete(theta, options.bits) : project_unit_modulus(theta);
  const TransmitSolution fin = solve_transmit(final_theta, instance, options.solver);
  if (fin.feasible && fin.amplitude <= start.amplitude) {
    sol.theta = final_theta;
    sol.x = fin.x;
    sol.power = fin.power;
  } else {
    sol.theta = theta0;
    sol.x = start.x;
    sol.power = start.power;
    sol.used_fallback = true;
  }
  sol.margins = worst_case_margins(sol.theta, sol.x, instance);
  sol.wall_time_ms = elapsed_ms(t0);
  return sol;
}

MultiuserSolution ao_multiuser(const RobustInstance& instance, std::mt19937_64& rng,
                               const MultiuserOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  MultiuserSolution sol;
  for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
    const RVector theta0 = random_start(instance.n, options.bits, rng);
    sol = ao_multiuser(instance, theta0, options);
    sol.redraws = attempt;
    if (sol.status != MultiuserStatus::kNoFeasibleStart) break;
  }
  sol.wall_time_ms = elapsed_ms(t0);
  return sol;
}

MultiuserSolution ao_multiuser_discrete(const RobustInstance& instance, int bits, const RVector& theta_continuous,
                                        std::mt19937_64& rng, MultiuserOptions options) {
  if (bits < 1) throw std::invalid_argument("bits must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  options.bits = bits;
  MultiuserSolution sol;
  if (theta_continuous.size() == 2 * instance.n) {
    sol = ao_multiuser(instance, round_to_discrete(theta_continuous, bits), options);
    if (sol.ok()) {
      sol.wall_time_ms = elapsed_ms(t0);
      return sol;
    }
  }
  sol = ao_multiuser(instance, rng, options);
  sol.wall_time_ms = elapsed_ms(t0);
  return sol;
}

MultiuserSolution ao_multiuser_discrete(const RobustInstance& instance, int bits, std::mt19937_64& rng,
                                        MultiuserOptions options) {
  if (bits < 1) throw std::invalid_argument("bits must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  options.bits = 0;
  const MultiuserSolution cont = ao_multiuser(instance, rng, options);
  MultiuserSolution sol = ao_multiuser_discrete(instance, bits, cont.ok() ? cont.theta : RVector(), rng, options);
  sol.wall_time_ms = elapsed_ms(t0);
  return sol;
}

MultiuserSolution random_phase_design(const RobustInstance& instance, std::mt19937_64& rng,
                                      const MultiuserOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  MultiuserSolution sol;
  for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
    const RVector theta0 = random_start(instance.n, options.bits, rng);
    const TransmitSolution ts = solve_transmit(theta0, instance, options.solver);
    sol.redraws = attempt;
    sol.theta_start = theta0;
    if (ts.feasible) {
      sol.status = MultiuserStatus::kConverged;
      sol.theta = theta0;
      sol.x = ts.x;
      sol.power = ts.power;
      sol.power_trace.push_back(ts.power);
      sol.margins = worst_case_margins(sol.theta, sol.x, instance);
      break;
    }
    sol.status = ts.status == cone::SolveStatus::kInfeasible ? MultiuserStatus::kNoFeasibleStart
                                                              : MultiuserStatus::kSolverFailure;
  }
  sol.wall_time_ms = elapsed_ms(t0);
  return sol;
}

}  // namespace irs
