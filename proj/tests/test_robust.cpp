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

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace irs;

namespace {

RobustInstance instance_for(const CMatrix& h, const Constellation& con, int symbol, double gamma, double delta,
                            const CVector& hd = CVector(), double delta_direct = 0.0) {
  RobustInstance inst;
  inst.n = static_cast<int>(h.rows());
  inst.m = static_cast<int>(h.cols());
  RobustUser u;
  u.channel = lift(h);
  u.cir = con.cir(symbol);
  u.xi = std::sqrt(gamma) * u.cir.offsets;
  u.delta = delta;
  if (hd.size() > 0) {
    u.direct = lift(CMatrix(hd.transpose()));
    u.delta_direct = delta_direct;
  }
  inst.users.push_back(u);
  return inst;
}

RVector lifted_theta(const RVector& phases) {
  RVector t(2 * phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    t(i) = std::cos(phases(i));
    t(i + phases.size()) = std::sin(phases(i));
  }
  return t;
}

RMatrix random_unit(int rows, int cols, std::mt19937_64& rng) {
  RMatrix e = RMatrix::NullaryExpr(rows, cols, [&] { return std::normal_distribution<double>()(rng); });
  return e / e.norm();
}

// Smallest perturbed margin found by sampling errors in the Frobenius ball of
// radius delta: uniform draws on the sphere followed by a random local search
// around the best draw. Every candidate is a feasible error.
double sampled_min_margin(const RVector& theta, const RVector& x, const RobustUser& u, int row, int samples,
                          std::mt19937_64& rng) {
  const auto rows = static_cast<int>(u.channel.rows());
  const auto cols = static_cast<int>(u.channel.cols());
  RMatrix best = u.delta * random_unit(rows, cols, rng);
  double best_m = perturbed_margin(theta, x, u, row, best);
  double step = 1.0;
  for (int s = 1; s < samples; ++s) {
    RMatrix cand;
    if (s < samples / 2) {
      cand = u.delta * random_unit(rows, cols, rng);
    } else {
      cand = best + step * u.delta * random_unit(rows, cols, rng);
      cand *= u.delta / cand.norm();
    }
    const double m = perturbed_margin(theta, x, u, row, cand);
    if (m < best_m) {
      best_m = m;
      best = cand;
    } else if (s >= samples / 2) {
      step = std::max(step * 0.999, 1e-4);
    }
  }
  return best_m;
}

}  // namespace

TEST_CASE("nominal margin matches the complex received sample") {
  std::mt19937_64 rng(3);
  for (const char* name : {"bpsk", "qpsk", "8psk", "16qam"}) {
    const auto con = Constellation::from_name(name);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % 5, m = 1 + trial % 3;
      const CMatrix h = oracle::random_complex(n, m, rng);
      const CVector hd = oracle::random_complex(m, 1, rng).col(0);
      const int sym = trial % con.order();
      const auto inst = instance_for(h, con, sym, 4.0, 0.0, hd, 0.0);
      const RVector ph = oracle::uniform_phases(n, rng);
      const CVector xc = oracle::random_complex(m, 1, rng).col(0);
      const RVector x = oracle::stack(xc);
      const cdouble y = oracle::received(ph, h, xc, hd);
      const auto cir = con.cir(sym);
      for (int i = 0; i < cir.size(); ++i) {
        const double expect = oracle::margin(cir.row(i), y, 2.0 * cir.offsets(i));
        CHECK(worst_case_margin(lifted_theta(ph), x, inst, 0, i) == doctest::Approx(expect).epsilon(1e-12));
      }
      const Eigen::Vector2d yl = lifted_received(lifted_theta(ph), x, inst.users[0].channel, inst.users[0].direct);
      CHECK(std::abs(yl(0) - y.real()) <= 1e-12 * (1.0 + std::abs(y)));
      CHECK(std::abs(yl(1) - y.imag()) <= 1e-12 * (1.0 + std::abs(y)));
    }
  }
}

TEST_CASE("zero transmit vector leaves only the offset") {
  std::mt19937_64 rng(4);
  const auto con = Constellation::from_name("8psk");
  const auto inst = instance_for(oracle::random_complex(4, 2, rng), con, 5, 10.0, 0.3);
  const RVector theta = lifted_theta(oracle::uniform_phases(4, rng));
  const auto ms = worst_case_margins(theta, RVector::Zero(4), inst);
  for (int i = 0; i < con.cir(5).size(); ++i) CHECK(ms[static_cast<std::size_t>(i)] == -inst.users[0].xi(i));
}

TEST_CASE("robust term equals the worst unstructured lifted error") {
  std::mt19937_64 rng(5);
  const auto con = Constellation::from_name("qpsk");
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = oracle::random_complex(2, 2, rng);
    const auto inst = instance_for(h, con, trial % 4, 1.0, 0.1 + 0.1 * trial);
    const auto& u = inst.users[0];
    const RVector theta = lifted_theta(oracle::uniform_phases(2, rng));
    const RVector x = oracle::random_real(4, rng);
    for (int row = 0; row < u.cir.size(); ++row) {
      const double nominal = perturbed_margin(theta, x, u, row, RMatrix::Zero(4, 4));
      const double closed = worst_case_margin(theta, x, inst, 0, row);
      const double term = u.delta * x.norm() * (oracle::cir_matrix(u.cir.row(row), 2).transpose() * theta).norm();
      CHECK(nominal - closed == doctest::Approx(term).epsilon(1e-12));
      const double sampled = sampled_min_margin(theta, x, u, row, 100000, rng);
      CHECK(sampled >= closed - 1e-12);
      CHECK(std::abs((nominal - sampled) - term) <= 0.01 * term);
    }
  }
}

TEST_CASE("structured errors never beat the closed form") {
  std::mt19937_64 rng(6);
  const auto con = Constellation::from_name("16qam");
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial, m = 2 + trial % 3;
    const CMatrix h = oracle::random_complex(n, m, rng);
    const CVector hd = oracle::random_complex(m, 1, rng).col(0);
    const double delta = 0.05 * (1 + trial % 4);
    const auto inst = instance_for(h, con, trial, 2.0, delta, hd, 0.5 * delta);
    const auto& u = inst.users[0];
    const RVector ph = oracle::uniform_phases(n, rng);
    const RVector theta = lifted_theta(ph);
    const CVector xc = oracle::random_complex(m, 1, rng).col(0);
    for (int s = 0; s < 500; ++s) {
      const CMatrix e = sample_error(n, m, delta, ErrorMode::kSurface, rng);
      const CMatrix ed = sample_error(1, m, 0.5 * delta, ErrorMode::kInterior, rng);
      const cdouble y = oracle::received(ph, h + e, xc, hd + ed.row(0).transpose());
      for (int row = 0; row < u.cir.size(); ++row) {
        const double actual = oracle::margin(u.cir.row(row), y, u.xi(row));
        CHECK(actual >= worst_case_margin(theta, oracle::stack(xc), inst, 0, row) - 1e-10);
      }
    }
  }
}

TEST_CASE("direct-link robust coefficient") {
  std::mt19937_64 rng(7);
  const auto con = Constellation::from_name("qpsk");
  const CMatrix h = oracle::random_complex(3, 2, rng);
  const CVector hd = oracle::random_complex(2, 1, rng).col(0);
  const auto inst = instance_for(h, con, 1, 1.0, 0.2, hd, 0.3);
  const RVector theta = lifted_theta(oracle::uniform_phases(3, rng));
  for (int row = 0; row < 2; ++row) {
    const double an = con.cir(1).row(row).norm();
    CHECK(robust_coefficient(theta, inst.users[0], row) == doctest::Approx(0.2 * an * std::sqrt(3.0) + 0.3 * an));
  }
}

TEST_CASE("feasibility check at the tight amplitude") {
  std::mt19937_64 rng(8);
  const auto con = Constellation::from_name("bpsk");
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial, m = 1 + trial % 4;
    const CMatrix h = oracle::random_complex(n, m, rng);
    const auto inst = instance_for(h, con, 0, 10.0, 0.05);
    const RVector ph = oracle::uniform_phases(n, rng);
    // maximum-ratio direction of the effective channel
    CVector eff = CVector::Zero(m);
    for (int i = 0; i < n; ++i) eff += std::polar(1.0, ph(i)) * h.row(i).transpose();
    const double amp = oracle::bpsk_amplitude(ph, h, 2.0 * std::sqrt(10.0), 0.05);
    if (!std::isfinite(amp)) continue;
    const CVector dir = con.point(0).real() * eff.conjugate() / eff.norm();
    const RVector theta = lifted_theta(ph);
    const auto ok = check_feasible(theta, oracle::stack(amp * dir), inst);
    CHECK(ok.feasible);
    CHECK(std::abs(ok.worst_margin) <= 1e-9 * std::sqrt(10.0));
    const auto bad = check_feasible(theta, oracle::stack(0.99 * amp * dir), inst);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.worst_user == 0);
  }
}

TEST_CASE("margin capacity is positively homogeneous in the instance scale") {
  std::mt19937_64 rng(9);
  const auto con = Constellation::from_name("qpsk");
  const CMatrix h = oracle::random_complex(4, 3, rng);
  const RVector theta = lifted_theta(oracle::uniform_phases(4, rng));
  const auto a = instance_for(h, con, 2, 1.0, 0.1);
  const auto b = instance_for(3.0 * h, con, 2, 1.0, 0.3);
  const double ca = robust_margin_capacity(theta, a);
  CHECK(robust_margin_capacity(theta, b) == doctest::Approx(3.0 * ca).epsilon(1e-6));
  // an error radius beyond every effective row norm leaves no capacity
  const auto c = instance_for(h, con, 2, 1.0, 100.0);
  CHECK(robust_margin_capacity(theta, c) < 0.0);
}

TEST_CASE("dimension checks") {
  std::mt19937_64 rng(10);
  const auto inst = instance_for(oracle::random_complex(3, 2, rng), Constellation::from_name("qpsk"), 0, 1.0, 0.1);
  CHECK_THROWS_AS(worst_case_margin(RVector::Zero(4), RVector::Zero(4), inst, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(worst_case_margin(RVector::Zero(6), RVector::Zero(3), inst, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(worst_case_margin(RVector::Zero(6), RVector::Zero(4), inst, 0, 7), std::invalid_argument);
}
