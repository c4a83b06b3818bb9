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

// Averages, quasi-moments, comb recovery from QCGF samples, energy and
// negativity diagnostics, and closed-evolution reference quantities.

#include <optional>
#include <span>
#include <vector>

#include "qwork/comb.hpp"
#include "qwork/model.hpp"
#include "qwork/protocol.hpp"

namespace qwork {

// sum_f w_f f^power
double comb_average(const DeltaComb& c, unsigned power = 1);

// G(chi) = sum_f w_f exp(i chi f) sampled on grid.
QcgfSamples comb_qcgf(const DeltaComb& c, ProtocolKind kind, std::span<const double> grid,
                      double lambda = 1.0);

inline constexpr unsigned kMaxMomentOrder = 4;

// 9-point symmetric grid with spacing 1e-3 / eps_max around chi = 0.
std::vector<double> moment_grid(const HamiltonianSchedule& sched);

// Re[(-i)^n d^n G / d chi^n] at chi = 0 from a central stencil of up to 9
// points. Throws GridTooCoarse when the grid has no symmetric neighborhood
// of 0 wide enough for order n, InvalidArgument for n > 4.
double quasi_moment(const QcgfSamples& g, unsigned order);

// Finite-difference weights for the derivative of the given order at x0
// over arbitrary distinct nodes.
std::vector<double> fornberg_weights(std::span<const double> nodes, double x0, unsigned order);

// Every peak position the protocol can produce, from the spectra alone.
std::vector<double> candidate_values(ProtocolKind kind, const HamiltonianSchedule& sched,
                                     double lambda = 1.0);

struct RecoveryResult {
  DeltaComb comb;
  double residual = 0.0;  // max_chi |G(chi) - sum_f w_f exp(i chi f)|
  double condition_number = 0.0;
  bool flagged = false;  // residual above kRecoveryResidualThreshold
};

inline constexpr double kRecoveryResidualThreshold = 1e-9;
inline constexpr double kMaxRecoveryCondition = 1e10;

// Least-squares weights for G(chi) = sum_f w_f exp(i chi f) over the given
// candidate positions. Throws IllConditioned, InvalidArgument (fewer
// samples than candidates).
RecoveryResult recover_comb(const QcgfSamples& g, std::span<const double> candidates,
                            double merge_tol);

struct EnergyAccount {
  double avg_dU = 0.0;
  double avg_Q = 0.0;
  double avg_W = 0.0;
  double residual = 0.0;  // avg_dU + avg_Q - avg_W
};

EnergyAccount energy_account(const DeltaComb& du, const DeltaComb& q, const DeltaComb& w);

struct NegativityReport {
  double negative_weight = 0.0;       // sum of negative weights, <= 0
  double half_quantum_weight = 0.0;   // sum of |w| at |f| = gap / 2
  std::vector<Peak> peaks;
};

NegativityReport negativity_report(const DeltaComb& c, double gap);

// Gap between the two lowest levels of H^0 (0 for d = 1).
double ground_gap(const HamiltonianSchedule& sched);

// Product of the step propagators exp(-i dt H^N) ... exp(-i dt H^0).
ComplexMatrix total_unitary(const HamiltonianSchedule& sched);

// Two-measurement work distribution of the closed evolution.
DeltaComb tmp_distribution(const SystemState& rho_s, const HamiltonianSchedule& sched);

// Tr[H^N U rho U^dagger] - Tr[H^0 rho] for the closed evolution.
double oracle_average_work(const SystemState& rho_s, const HamiltonianSchedule& sched);

}  // namespace qwork
