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

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace irs;

TEST_CASE("lift of scalars") {
  CMatrix one(1, 1);
  one(0, 0) = 1.0;
  RMatrix expect_one(2, 2);
  expect_one << 1, 0, 0, 1;
  CHECK(lift(one).isApprox(expect_one));

  CMatrix j(1, 1);
  j(0, 0) = cdouble(0.0, 1.0);
  RMatrix expect_j(2, 2);
  expect_j << 0, -1, 1, 0;
  CHECK((lift(j) - expect_j).norm() == 0.0);
}

TEST_CASE("lift is a homomorphism and scales the Frobenius norm by sqrt 2") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix u = oracle::random_complex(2, 3, rng);
    const CMatrix v = oracle::random_complex(3, 2, rng);
    CHECK((lift(u * v) - lift(u) * lift(v)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((lift(u.adjoint()) - lift(u).transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(lift(u).norm() == doctest::Approx(std::sqrt(2.0) * u.norm()).epsilon(1e-14));
  }
}

TEST_CASE("lift_vector round trip") {
  std::mt19937_64 rng(3);
  const CVector v = oracle::random_complex(5, 1, rng).col(0);
  CHECK((lift_vector(v) - oracle::stack(v)).norm() == 0.0);
  CHECK((unlift_vector(lift_vector(v)) - v).norm() == 0.0);
}

TEST_CASE("phase vectors") {
  SUBCASE("zero phases") {
    const auto pv = lift_phase_vector(RVector::Zero(3));
    RVector expect(6);
    expect << 1, 1, 1, 0, 0, 0;
    CHECK((pv.lifted - expect).norm() == 0.0);
  }
  SUBCASE("norms and round trip") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const RVector ph = oracle::uniform_phases(4, rng);
      const auto pv = lift_phase_vector(ph);
      CHECK(pv.lifted.norm() == doctest::Approx(2.0).epsilon(1e-14));
      for (int n = 0; n < 4; ++n) CHECK((element_selector(n, 4) * pv.lifted).norm() == doctest::Approx(1.0));
      CHECK((lift_phase_vector(phases_from_lifted(pv.lifted)).lifted - pv.lifted).cwiseAbs().maxCoeff() <= 1e-12);
      for (int n = 0; n < 4; ++n) CHECK(std::abs(pv.multipliers(n) - std::polar(1.0, ph(n))) <= 1e-15);
    }
  }
}

TEST_CASE("lifted received signal matches complex evaluation") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const int m = 1 + trial % 4;
    const RVector ph = oracle::uniform_phases(n, rng);
    const CMatrix h = oracle::random_complex(n, m, rng);
    const CVector x = oracle::random_complex(m, 1, rng).col(0);
    const cdouble y = oracle::received(ph, h, x);
    const RVector yl = phase_operator(lift_phase_vector(ph).lifted) * lift(h) * oracle::stack(x);
    REQUIRE(yl.size() == 2);
    CHECK(std::abs(yl(0) - y.real()) <= 1e-12);
    CHECK(std::abs(yl(1) - y.imag()) <= 1e-12);
  }
}

TEST_CASE("CIR row matrices") {
  SUBCASE("BPSK row") {
    const int n = 5;
    RMatrix expect = RMatrix::Zero(2 * n, 2 * n);
    expect.topLeftCorner(n, n) = 2.0 * RMatrix::Identity(n, n);
    expect.bottomRightCorner(n, n) = -2.0 * RMatrix::Identity(n, n);
    CHECK((cir_row_matrix(Eigen::Vector2d(2, 0), n) - expect).norm() == 0.0);
  }
  SUBCASE("QPSK row") {
    const int n = 3;
    const double r2 = std::sqrt(2.0);
    RMatrix expect = RMatrix::Zero(2 * n, 2 * n);
    expect.topLeftCorner(n, n) = -r2 * RMatrix::Identity(n, n);
    expect.bottomRightCorner(n, n) = r2 * RMatrix::Identity(n, n);
    CHECK((cir_row_matrix(Eigen::Vector2d(-r2, 0), n) - expect).norm() <= 1e-15);
  }
  SUBCASE("Kronecker construction and margin identity") {
    std::mt19937_64 rng(13);
    const int sizes[] = {1, 2, 8};
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = sizes[trial % 3];
      const Eigen::Vector2d a = oracle::random_real(2, rng);
      const RVector ph = oracle::uniform_phases(n, rng);
      const RVector theta = lift_phase_vector(ph).lifted;
      const RMatrix d = cir_row_matrix(a, n);
      REQUIRE((d - oracle::cir_matrix(a, n)).cwiseAbs().maxCoeff() <= 1e-15);
      // a^T Theta from the complex definition: column n of Theta maps
      // (Re z_n, Im z_n) to the real/imag parts of e^{j phi} z_n.
      RVector lhs(2 * n);
      for (int e = 0; e < n; ++e) {
        const double c = std::cos(ph(e)), s = std::sin(ph(e));
        lhs(e) = a(0) * c + a(1) * s;
        lhs(e + n) = -a(0) * s + a(1) * c;
      }
      CHECK((lhs - d.transpose() * theta).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((apply_cir_row_transpose(a, theta) - d.transpose() * theta).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((RVector(a.transpose() * phase_operator(theta)) - d.transpose() * theta).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("BPSK norm identity") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + trial % 9;
      const RVector theta = lift_phase_vector(oracle::uniform_phases(n, rng)).lifted;
      CHECK((theta.transpose() * cir_row_matrix(Eigen::Vector2d(2, 0), n)).norm() ==
            doctest::Approx(2.0 * std::sqrt(static_cast<double>(n))).epsilon(1e-13));
    }
  }
}

TEST_CASE("selectors and unit-modulus projection") {
  const RMatrix b = element_selector(1, 3);
  RMatrix expect = RMatrix::Zero(2, 6);
  expect(0, 1) = 1.0;
  expect(1, 4) = 1.0;
  CHECK((b - expect).norm() == 0.0);

  RVector v(4);
  v << 3, 0, 4, 0;  // elements 3+4j and 0
  const RVector p = project_unit_modulus(v);
  CHECK(p(0) == doctest::Approx(0.6));
  CHECK(p(2) == doctest::Approx(0.8));
  CHECK(p(1) == doctest::Approx(1.0));
  CHECK(p(3) == doctest::Approx(0.0));
  CHECK(max_modulus_deviation(v) == doctest::Approx(4.0));
  CHECK(max_modulus_deviation(p) <= 1e-15);
}
