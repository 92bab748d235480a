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

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace irs;

namespace {

const Constellation kBpsk = Constellation::from_name("bpsk");

RobustInstance bpsk_instance(const CMatrix& h, double gamma, double delta, int symbol = 1) {
  RobustInstance inst;
  inst.n = static_cast<int>(h.rows());
  inst.m = static_cast<int>(h.cols());
  RobustUser u;
  u.channel = lift(h);
  u.cir = kBpsk.cir(symbol);
  u.xi = std::sqrt(gamma) * u.cir.offsets;
  u.delta = delta;
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

RMatrix partner(int n) {
  RMatrix j = RMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -RMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = RMatrix::Identity(n, n);
  return j;
}

RVector element_traces(const RMatrix& x) {
  const auto n = x.rows() / 2;
  RVector t(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = x(i, i) + x(i + n, i + n);
  return t;
}

double db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace

TEST_CASE("closed-form amplitude matches the complex expression") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 7, m = 1 + trial % 4;
    const CMatrix h = oracle::random_complex(n, m, rng);
    const double gamma = 1.0 + trial, delta = 0.01 * (trial % 5);
    const auto inst = bpsk_instance(h, gamma, delta, trial % 2);
    const RVector ph = oracle::uniform_phases(n, rng);
    const double expect = oracle::bpsk_amplitude(ph, h, 2.0 * std::sqrt(gamma), delta);
    CHECK(closed_form_amplitude(inst, lifted_theta(ph)) == doctest::Approx(expect).epsilon(1e-12));
    // the quadratic form of the Gram matrix is the squared effective gain
    CVector eff = CVector::Zero(m);
    for (int i = 0; i < n; ++i) eff += std::polar(1.0, ph(i)) * h.row(i).transpose();
    const RVector t = lifted_theta(ph);
    CHECK(t.dot(bpsk_gram(inst) * t) == doctest::Approx(4.0 * eff.squaredNorm()).epsilon(1e-12));
    // maximum-ratio transmission meets the nominal constraint with equality
    const RVector x = mrt_transmit(inst, t);
    if (std::isfinite(expect)) {
      CHECK(x.norm() == doctest::Approx(expect).epsilon(1e-10));
      CHECK(std::abs(worst_case_margin(t, x, inst, 0, 0)) <= 1e-9 * std::sqrt(gamma));
    }
  }
  SUBCASE("scalar channel") {
    CMatrix h(1, 1);
    h << 1.0;
    const auto inst = bpsk_instance(h, 1.0, 0.0);
    CHECK(closed_form_amplitude(inst, lifted_theta(RVector::Zero(1))) == doctest::Approx(1.0));
  }
}

TEST_CASE("instances outside the single-user BPSK form are rejected") {
  std::mt19937_64 rng(12);
  auto inst = bpsk_instance(oracle::random_complex(2, 2, rng), 1.0, 0.0);
  inst.users.push_back(inst.users.front());
  CHECK_THROWS_AS(require_single_user_bpsk(inst), std::invalid_argument);
  RobustInstance q = bpsk_instance(oracle::random_complex(2, 2, rng), 1.0, 0.0);
  q.users[0].cir = Constellation::from_name("qpsk").cir(0);
  q.users[0].xi = q.users[0].cir.offsets;
  CHECK_THROWS_AS(require_single_user_bpsk(q), std::invalid_argument);
}

TEST_CASE("SDR on an instance with identity Gram matrix") {
  for (int n : {2, 4, 8}) {
    const CMatrix h = 0.5 * CMatrix::Identity(n, n);
    const auto inst = bpsk_instance(h, 4.0, 0.05);
    CHECK((bpsk_gram(inst) - RMatrix::Identity(2 * n, 2 * n)).norm() <= 1e-14);
    std::mt19937_64 rng(13);
    const auto sol = sdr_solve(inst, rng);
    REQUIRE(sol.status == cone::SolveStatus::kOptimal);
    CHECK(sol.sdp_objective == doctest::Approx(n).epsilon(1e-7));
    const double rho = 0.05 * 2.0 * std::sqrt(static_cast<double>(n));
    CHECK(sol.amplitude_lower_bound == doctest::Approx(4.0 / (std::sqrt(n) - rho)).epsilon(1e-7));
    // every unit-modulus theta attains the bound here
    CHECK(sol.amplitude == doctest::Approx(sol.amplitude_lower_bound).epsilon(1e-6));
    CHECK(sol.feasible);
  }
}

TEST_CASE("relaxation dominates every unit-modulus point") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix h = oracle::random_complex(8, 4, rng);
    const auto inst = bpsk_instance(h, 10.0, 0.02);
    const auto sol = sdr_solve(inst, rng);
    REQUIRE(sol.status == cone::SolveStatus::kOptimal);
    const RMatrix w = bpsk_gram(inst);
    CHECK((element_traces(sol.relaxed).array() - 1.0).abs().maxCoeff() <= 1e-6);
    CHECK((sol.relaxed * w).trace() == doctest::Approx(sol.sdp_objective).epsilon(1e-6));
    for (int s = 0; s < 200; ++s) {
      const RVector t = lifted_theta(oracle::uniform_phases(8, rng));
      CHECK(t.dot(w * t) <= sol.sdp_objective * (1.0 + 1e-9));
    }
    CHECK(sol.power >= sol.amplitude_lower_bound * sol.amplitude_lower_bound * (1.0 - 1e-6));
    CHECK(sol.feasible);
    CHECK(check_feasible(sol.theta, sol.x, inst).feasible);
    CHECK(max_modulus_deviation(sol.theta) <= 1e-9);
  }
}

TEST_CASE("rank reduction keeps objective and element traces") {
  std::mt19937_64 rng(15);
  const int n = 6;
  const RMatrix j = partner(n);
  const CMatrix h = oracle::random_complex(n, 3, rng);
  const RMatrix w = bpsk_gram(bpsk_instance(h, 1.0, 0.0));
  for (int r = 1; r <= 3; ++r) {
    // X = sum_i (v v^T + J v v^T J^T) over r random vectors has rank 2r and
    // commutes with J
    RMatrix x = RMatrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < r; ++i) {
      const RVector v = oracle::random_real(2 * n, rng);
      x += v * v.transpose() + (j * v) * (j * v).transpose();
    }
    REQUIRE(numerical_rank(x) == 2 * r);
    const RMatrix y = rank_reduce(x);
    CHECK(numerical_rank(y) < numerical_rank(x));
    CHECK(std::abs((y * w).trace() - (x * w).trace()) <= 1e-9 * (x * w).trace());
    CHECK((element_traces(y) - element_traces(x)).cwiseAbs().maxCoeff() <= 1e-9 * x.trace());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(y);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * x.trace());
  }
  SUBCASE("rank one input is returned unchanged") {
    const RVector v = lifted_theta(oracle::uniform_phases(n, rng));
    const RMatrix x = v * v.transpose();
    CHECK((rank_reduce(x) - x).norm() <= 1e-12);
  }
}

TEST_CASE("AO with a single element is exact") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix h = oracle::random_complex(1, 1 + trial % 4, rng);
    const auto inst = bpsk_instance(h, 10.0, 0.01);
    const auto tr = ao_solve(inst, random_phases(1, rng));
    REQUIRE(tr.feasible);
    const double expect = 2.0 * std::sqrt(10.0) / (2.0 * h.norm() - 0.02);
    CHECK(tr.final_power() == doctest::Approx(expect * expect).epsilon(1e-9));
  }
}

TEST_CASE("AO with one antenna aligns all reflected paths") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + 3 * trial;
    const CMatrix h = oracle::random_complex(n, 1, rng);
    const auto inst = bpsk_instance(h, 10.0, 0.02);
    const auto tr = ao_solve(inst, random_phases(n, rng));
    REQUIRE(tr.feasible);
    const double amp = 2.0 * std::sqrt(10.0) / (2.0 * h.cwiseAbs().sum() - 0.04 * std::sqrt(n));
    CHECK(tr.final_power() == doctest::Approx(amp * amp).epsilon(1e-8));
  }
}

TEST_CASE("AO against a phase grid for two elements") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = oracle::random_complex(2, 2, rng);
    const auto inst = bpsk_instance(h, 10.0, 0.02);
    const double grid = oracle::grid_bpsk_amplitude(h, 2.0 * std::sqrt(10.0), 0.02, 720);
    const auto tr = ao_solve(inst, random_phases(2, rng));
    REQUIRE(tr.feasible);
    CHECK(db(tr.final_power() / (grid * grid)) <= 0.1);
    CHECK(tr.final_power() >= grid * grid * (1.0 - 1e-3));
  }
}

TEST_CASE("AO trace, margins and scaling") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = oracle::random_complex(16, 4, rng);
    const auto inst = bpsk_instance(h, 10.0, 0.02);
    const RVector start = random_phases(16, rng);
    const auto tr = ao_solve(inst, start);
    REQUIRE(tr.feasible);
    REQUIRE(tr.power.size() >= 2);
    for (std::size_t i = 1; i < tr.power.size(); ++i) CHECK(tr.power[i] <= tr.power[i - 1] * (1.0 + 1e-12));
    CHECK(max_modulus_deviation(tr.theta) <= 1e-12);
    CHECK(tr.x.squaredNorm() == doctest::Approx(tr.final_power()).epsilon(1e-12));
    CHECK(std::abs(check_feasible(tr.theta, tr.x, inst).worst_margin) <= 1e-8);

    const auto doubled = ao_solve(bpsk_instance(h, 20.0, 0.02), start);
    CHECK(doubled.final_power() == doctest::Approx(2.0 * tr.final_power()).epsilon(1e-9));

    const auto sdr = sdr_solve(inst, rng);
    REQUIRE(sdr.status == cone::SolveStatus::kOptimal);
    const double lb = sdr.amplitude_lower_bound * sdr.amplitude_lower_bound;
    CHECK(tr.final_power() >= lb * (1.0 - 1e-6));
    CHECK(sdr.power >= lb * (1.0 - 1e-6));
  }
}

TEST_CASE("random phases are on the unit circle and reproducible") {
  std::mt19937_64 a(20), b(20);
  const RVector ta = random_phases(9, a);
  CHECK(ta.size() == 18);
  CHECK(max_modulus_deviation(ta) <= 1e-15);
  CHECK((ta - random_phases(9, b)).norm() == 0.0);
}
