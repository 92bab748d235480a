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

#include "irs/constellation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irs {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kQamSide = 4;
const double kQamScale = 1.0 / std::sqrt(10.0);

int psk_order(Modulation m) {
  switch (m) {
    case Modulation::kBpsk: return 2;
    case Modulation::kQpsk: return 4;
    case Modulation::kPsk8: return 8;
    case Modulation::kQam16: return 0;
  }
  return 0;
}

// Halfspace rows on one axis of a 16-QAM point. `level` is the integer grid
// coordinate in {-3,-1,1,3}; `axis` selects Re (0) or Im (1).
void qam_axis_rows(int level, int axis, std::vector<Eigen::Vector2d>& rows, std::vector<double>& offsets) {
  Eigen::Vector2d e = Eigen::Vector2d::Zero();
  e(axis) = 1.0;
  const double sign = level > 0 ? 1.0 : -1.0;
  if (std::abs(level) == 3) {
    // outer level: open outward, boundary through the nominal point
    rows.push_back(sign * e);
    offsets.push_back(3.0 * kQamScale);
  } else {
    // inner level: the decision cell between 0 and the +-2 threshold
    rows.push_back(sign * e);
    offsets.push_back(0.0);
    rows.push_back(-sign * e);
    offsets.push_back(-2.0 * kQamScale);
  }
}

}  // namespace

Constellation::Constellation(Modulation modulation) : modulation_(modulation) {
  if (modulation == Modulation::kQam16) {
    for (int ir = 0; ir < kQamSide; ++ir)
      for (int ii = 0; ii < kQamSide; ++ii)
        points_.emplace_back((2 * ir - 3) * kQamScale, (2 * ii - 3) * kQamScale);
    return;
  }
  const int m = psk_order(modulation);
  // BPSK sits on the real axis; higher orders are offset by pi/M so that QPSK
  // has one point per quadrant.
  const double offset = m == 2 ? 0.0 : kPi / m;
  for (int i = 0; i < m; ++i) points_.push_back(std::polar(1.0, offset + 2.0 * kPi * i / m));
}

Constellation Constellation::from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "bpsk") return Constellation(Modulation::kBpsk);
  if (lower == "qpsk") return Constellation(Modulation::kQpsk);
  if (lower == "8psk") return Constellation(Modulation::kPsk8);
  if (lower == "16qam") return Constellation(Modulation::kQam16);
  throw std::invalid_argument("unsupported constellation '" + std::string(name) + "'");
}

std::string Constellation::name() const {
  switch (modulation_) {
    case Modulation::kBpsk: return "bpsk";
    case Modulation::kQpsk: return "qpsk";
    case Modulation::kPsk8: return "8psk";
    case Modulation::kQam16: return "16qam";
  }
  return "unknown";
}

CirSpec Constellation::cir(int index) const {
  if (index < 0 || index >= order()) throw std::out_of_range("constellation point index out of range");
  const cdouble s = points_[static_cast<std::size_t>(index)];
  CirSpec spec;

  if (modulation_ == Modulation::kQam16) {
    std::vector<Eigen::Vector2d> rows;
    std::vector<double> offsets;
    qam_axis_rows(static_cast<int>(std::lround(s.real() / kQamScale)), 0, rows, offsets);
    qam_axis_rows(static_cast<int>(std::lround(s.imag() / kQamScale)), 1, rows, offsets);
    spec.rows.resize(static_cast<Eigen::Index>(rows.size()), 2);
    spec.offsets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      spec.rows.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      spec.offsets(static_cast<Eigen::Index>(i)) = offsets[i];
    }
    return spec;
  }

  const double c = s.real();
  const double sn = s.imag();
  if (modulation_ == Modulation::kBpsk) {
    spec.rows.resize(1, 2);
    spec.rows << 2.0 * c, 2.0 * sn;
    spec.offsets = RVector::Constant(1, 2.0);
    return spec;
  }

  // Cone with apex at the point: Re' +- cot(pi/M) Im' >= 1 in the frame
  // rotated by -arg(s), with Re' = c Re + s Im and Im' = -s Re + c Im.
  const double cot = 1.0 / std::tan(kPi / order());
  spec.rows.resize(2, 2);
  spec.rows << c - cot * sn, sn + cot * c,
               c + cot * sn, sn - cot * c;
  spec.offsets = RVector::Constant(2, 1.0);
  return spec;
}

int Constellation::detect(cdouble y) const {
  int best = 0;
  double best_dist = std::norm(y - points_[0]);
  for (int i = 1; i < order(); ++i) {
    const double d = std::norm(y - points_[static_cast<std::size_t>(i)]);
    if (d < best_dist - 1e-12 * std::max(1.0, best_dist)) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

std::vector<int> Constellation::random_symbols(int count, std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> pick(0, order() - 1);
  std::vector<int> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = pick(rng);
  return out;
}

}  // namespace irs
