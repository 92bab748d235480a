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

#include "irs/lift.hpp"

#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace irs {

enum class Modulation { kBpsk, kQpsk, kPsk8, kQam16 };

/// Halfspace description of a constructive interference region in units of
/// the scaled point: {y : rows * [Re y; Im y] >= scale * offsets}, where the
/// scale is sigma * sqrt(gamma).
struct CirSpec {
  Eigen::Matrix<double, Eigen::Dynamic, 2> rows;
  RVector offsets;

  int size() const { return static_cast<int>(offsets.size()); }
  Eigen::Vector2d row(int i) const { return rows.row(i).transpose(); }
};

class Constellation {
 public:
  explicit Constellation(Modulation modulation);

  /// Accepts "bpsk", "qpsk", "8psk", "16qam" (case-insensitive).
  /// Throws std::invalid_argument for anything else.
  static Constellation from_name(std::string_view name);

  Modulation modulation() const { return modulation_; }
  std::string name() const;
  int order() const { return static_cast<int>(points_.size()); }
  const std::vector<cdouble>& points() const { return points_; }
  cdouble point(int index) const { return points_.at(static_cast<std::size_t>(index)); }

  /// CIR halfspaces for one point. Throws std::out_of_range on a bad index.
  CirSpec cir(int index) const;

  /// Maximum-likelihood decision on a received sample already divided by the
  /// target amplitude sigma * sqrt(gamma). Ties go to the lowest index.
  int detect(cdouble y) const;

  /// I.i.d. uniform symbol indices.
  std::vector<int> random_symbols(int count, std::mt19937_64& rng) const;

 private:
  Modulation modulation_;
  std::vector<cdouble> points_;
};

}  // namespace irs
