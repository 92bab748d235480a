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

/// @file cli.hpp
/// @brief Command-line front end.
///
/// Subcommands: single-user, multiuser, sweep, ser, timing. Settings come
/// from flags, then the --config file, then the subcommand or preset
/// defaults. Exit codes: 0 success, 1 infeasible or failed run, 2 usage or
/// configuration error.

#pragma once

#include <iosfwd>

namespace irs {

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irs
