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

// JSON scenario configs and the full simulate pipeline: combs, QCGFs,
// cross-route residuals and output files.
//
// Config schema (keys not listed are rejected):
//
//   dimension       integer d (optional, inferred from the Hamiltonian)
//   hamiltonian     {"type": "constant", "operator": OP}
//                   {"type": "linear_ramp", "from": OP, "to": OP}
//                   {"type": "tabulated", "samples": [OP, ...]}   (N + 1 samples)
//   total_time      T > 0
//   steps           N >= 1 (implied by tabulated samples)
//   channel         {"type": "none"}
//                   {"type": "amplitude_damping", "p": x}  or  "p_schedule": [N + 1 values]
//                   {"type": "kraus", "operators": [OP, ...]}
//   initial_state   "ground" | "excited" | "plus_x" | OP
//   detector        {"hamiltonian": OP, "lambda": x, "lambda_prime": y, "rho": OP | "plus_x"}
//   protocols       subset of ["internal_energy", "heat", "work"]
//   chi_grid        {"points": n, "half_width": x} | {"values": [...]}
//   outputs         {"directory": path, "prefix": name}
//
// OP is {"pauli": {"i": a, "x": b, "y": c, "z": d}} (qubits) or
// {"matrix": [[z, ...], ...]} with z a number or [re, im].

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwork/analysis.hpp"
#include "qwork/error.hpp"
#include "qwork/path_sum.hpp"

namespace qwork {

// Error with code Config; message is "line L: key: what".
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& key, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Scenario {
  std::string name;
  std::string source;  // raw JSON text
  HamiltonianSchedule schedule;
  KrausChannel channel;
  SystemState initial;
  DetectorSpec detector;
  std::vector<ProtocolKind> protocols;
  std::vector<double> chi_grid;
  std::string output_directory;
  std::string output_prefix;
};

// Throws ConfigError.
Scenario parse_scenario(std::string_view text, std::string name);
Scenario load_scenario_file(const std::filesystem::path& path);

// Names of the scenarios compiled into the library.
std::vector<std::string> bundled_scenario_names();
Scenario load_bundled_scenario(std::string_view name);

// Rebuilds the scenario with the amplitude-damping probability replaced.
Scenario with_damping(const Scenario& base, double p);
// Rebuilds the scenario with a default-width chi grid of the given size.
Scenario with_grid_points(const Scenario& base, std::size_t points);

enum class Route { Joint, Tilted, Paths, Comb, All };

Route parse_route(std::string_view name);
std::string_view to_string(Route route);

struct RunOptions {
  Route route = Route::All;
  BuildOptions build;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct ProtocolResult {
  ProtocolKind kind = ProtocolKind::Work;
  DeltaComb comb;
  QcgfSamples qcgf;
  NegativityReport negativity;
  std::string comb_route;                     // "paths" or "comb"
  double tilted_vs_joint = 0.0;               // max |G_tilted - G_joint|
  double forward_residual = 0.0;              // max |G - sum_f w_f e^{i chi f}|
  std::optional<double> paths_vs_comb;        // both path-sum algorithms ran
  std::optional<RecoveryResult> recovery;     // QCGF inversion
  std::optional<CombDifference> recovery_vs_paths;
  std::string recovery_note;                  // why recovery was skipped
};

struct RunResult {
  std::string name;
  double gap = 0.0;
  std::array<ProtocolResult, 3> protocols;  // in kAllProtocols order
  EnergyAccount account;         // from the comb averages
  EnergyAccount moment_account;  // from first quasi-moments of the QCGFs

  const ProtocolResult& get(ProtocolKind kind) const;
  // Most negative total negative weight and largest half-quantum weight
  // over the three combs.
  double negativity() const;
  double half_quantum_weight() const;
};

RunResult run_scenario(const Scenario& sc, const RunOptions& opts = {});

struct InvariantCheck {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

// Normalization, QCGF bounds, route agreement and energy conservation.
std::vector<InvariantCheck> check_invariants(const RunResult& r);

// Shortest round-trip decimal form.
std::string format_double(double x);

std::string comb_csv(const DeltaComb& c);
std::string qcgf_csv(const QcgfSamples& g);
std::string summary_json(const RunResult& r);

// Writes CSVs for the scenario's protocols and the summary JSON; returns the
// paths written.
std::vector<std::filesystem::path> write_outputs(const Scenario& sc, const RunResult& r,
                                                 const std::filesystem::path& directory);

}  // namespace qwork
