// Copyright 2026 The qwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// The `qwork` command line: simulate, sweep and verify.
//
// Exit status: 0 success, 1 verification failure, 2 configuration or usage
// error, 3 numerical invariant violation.

#include <iosfwd>
#include <string>
#include <vector>

#include "qwork/scenario.hpp"

namespace qwork {

inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  BuildOptions build;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct VerifyRow {
  std::string scenario;
  InvariantCheck check;
};

// Invariant suite over the bundled scenarios plus scenario-specific
// reference values.
std::vector<VerifyRow> run_verify(const VerifyOptions& opts);

struct SweepRow {
  double parameter;
  EnergyAccount account;
  double negativity;
  double half_quantum_weight;
};

enum class SweepParameter { DampingProbability, GridPoints };

std::vector<SweepRow> run_sweep(const Scenario& base, SweepParameter param,
                                const std::vector<double>& values, const RunOptions& opts);

std::string sweep_csv(SweepParameter param, const std::vector<SweepRow>& rows);

}  // namespace qwork
