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

// Detector coupling protocols and the propagation of system + detector.
//
// A protocol is an ordered list of events acting on the joint state:
//   Couple(+/-, s)  exp(+/- i (chi/2) H^s (x) H_D), instantaneous
//   Unitary(s)      exp(-i dt H^s) (x) I_D
//   Dissipate(s)    rho -> sum_k (M^{k,s} (x) I) rho (M^{k,s} (x) I)^dagger
//
// INTERNAL_ENERGY couples only at the ends: Couple(-,0) ... Couple(+,N).
// HEAT sandwiches every dissipation: Unitary(s), Couple(+,s), Dissipate(s),
// Couple(-,s). WORK is HEAT with the end couplings Couple(-,0) and
// Couple(+,N) added; the two differ by exactly those two events.
//
// The quasi-characteristic generating function is the detector coherence
// ratio G(chi) = <lambda|rho_D(T)|lambda'> / <lambda|rho_D(0)|lambda'>.

#include <string_view>
#include <vector>

#include "qwork/linalg.hpp"
#include "qwork/model.hpp"

namespace qwork {

enum class ProtocolKind { InternalEnergy, Heat, Work };

inline constexpr ProtocolKind kAllProtocols[] = {ProtocolKind::InternalEnergy, ProtocolKind::Heat,
                                                 ProtocolKind::Work};

std::string_view to_string(ProtocolKind kind);
// Accepts "internal_energy" (or "dU"), "heat" (or "Q"), "work" (or "W").
ProtocolKind parse_protocol_kind(std::string_view name);

enum class EventType { Couple, Unitary, Dissipate };

struct Event {
  EventType type;
  int sign;  // +1 / -1 for Couple, 0 otherwise
  std::size_t step;

  static Event couple(int sign, std::size_t step) { return {EventType::Couple, sign, step}; }
  static Event unitary(std::size_t step) { return {EventType::Unitary, 0, step}; }
  static Event dissipate(std::size_t step) { return {EventType::Dissipate, 0, step}; }
  friend bool operator==(const Event&, const Event&) = default;
};

struct ProtocolSchedule {
  ProtocolKind kind;
  std::size_t steps;  // N
  std::vector<Event> events;
};

struct BuildOptions {
  // Test hook: flips the sign of every coupling of the HEAT protocol only,
  // which breaks energy conservation. Never set outside mutation tests.
  bool flip_heat_coupling_sign = false;
};

ProtocolSchedule build_schedule(ProtocolKind kind, const HamiltonianSchedule& sched,
                                BuildOptions opts = {});

enum class PropagationRoute { Joint, Tilted };

// Full system (x) detector density matrix after every event of ps; dimension
// d * d_D with the system index major. Throws DimensionMismatch.
ComplexMatrix propagate_joint(const SystemState& rho_s, const DetectorSpec& det,
                              const ProtocolSchedule& ps, const KrausChannel& ch,
                              const HamiltonianSchedule& sched, double chi);

// The <lambda| . |lambda'> block of the joint state, divided by the initial
// detector coherence: a d x d system operator whose trace is G(chi).
ComplexMatrix propagate_tilted(const SystemState& rho_s, const DetectorSpec& det,
                               const ProtocolSchedule& ps, const KrausChannel& ch,
                               const HamiltonianSchedule& sched, double chi);

// <lambda| Tr_S rho_SD |lambda'> / <lambda| rho_D(0) |lambda'>
cplx coherence_ratio(const ComplexMatrix& joint, const DetectorSpec& det);

struct QcgfSamples {
  ProtocolKind kind;
  double lambda;
  double lambda_prime;
  std::vector<double> chi;
  std::vector<cplx> values;
};

QcgfSamples qcgf(const SystemState& rho_s, const DetectorSpec& det, ProtocolKind kind,
                 const KrausChannel& ch, const HamiltonianSchedule& sched,
                 std::span<const double> chi_grid, PropagationRoute route = PropagationRoute::Tilted,
                 BuildOptions opts = {});

// n uniform points on [-half_width, half_width].
std::vector<double> uniform_grid(double half_width, std::size_t points);

// 257 points on [-4 pi / eps_max, 4 pi / eps_max], eps_max = max |eigenvalue|.
std::vector<double> default_chi_grid(const HamiltonianSchedule& sched);

}  // namespace qwork
