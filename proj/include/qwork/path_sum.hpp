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

// Exact quasi-probability combs from the sum over pairs of paths through the
// instantaneous eigenbases. A bra path i_0 -> n_0 -> i_1 -> ... -> n_N and a
// ket path j_0 -> m_0 -> ... -> m_N share the Kraus index k_s at every step
// and end on the same state (n_N = m_N, from the final trace). Their weight is
//
//   A1 rho_{i_0 j_0} conj(A2),   A = prod_s M^{k_s,s}_{n_s i_s} U^s_{i_s n_{s-1}},
//
// where U^s_{i n} = exp(-i dt eps^s_i) <i_s|n_{s-1}> carries the overlap
// between consecutive eigenbases (and is diagonal at s = 0). Each path
// carries heat, internal-energy and work labels; with lambda' = -lambda a
// pair contributes a peak at (lambda / 2) (label_bra + label_ket).
//
// Two algorithms produce the same comb: explicit enumeration of the pairs and
// a transfer scheme that carries, for each (bra, ket) index pair, the
// sub-comb of accumulated labels through the protocol events.

#include <cstdint>
#include <functional>

#include "qwork/comb.hpp"
#include "qwork/model.hpp"
#include "qwork/protocol.hpp"

namespace qwork {

struct PathPair {
  std::vector<std::size_t> bra_in, bra_out;  // i_s, n_s
  std::vector<std::size_t> ket_in, ket_out;  // j_s, m_s
  std::vector<std::size_t> kraus;            // k_s
  cplx amplitude;

  // Path labels at lambda = 1 (energy units).
  double heat_bra = 0.0, heat_ket = 0.0;  // sum_s eps_{i_s} - eps_{n_s}
  double du_bra = 0.0, du_ket = 0.0;      // eps_{n_N} - eps_{i_0}
  double work_bra = 0.0, work_ket = 0.0;  // sum_s eps_{i_{s+1}} - eps_{n_s}

  double label(ProtocolKind kind, bool bra) const;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Upper bound on the number of path pairs enumeration would visit.
double path_pair_bound(const HamiltonianSchedule& sched, const KrausChannel& ch);

// Calls sink once for every pair with nonzero amplitude. Throws
// EnumerationCapExceeded when path_pair_bound exceeds cap.
void enumerate_path_pairs(const SystemState& rho_s, const HamiltonianSchedule& sched,
                          const KrausChannel& ch, const std::function<void(const PathPair&)>& sink,
                          std::uint64_t cap = kDefaultEnumerationCap);

enum class PathStrategy { Auto, Enumerate, Propagate };

struct PathSumOptions {
  double lambda = 1.0;
  PathStrategy strategy = PathStrategy::Auto;  // Auto enumerates while under the cap
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

DeltaComb qpdf(ProtocolKind kind, const SystemState& rho_s, const HamiltonianSchedule& sched,
               const KrausChannel& ch, const PathSumOptions& opts = {});

// Peaks at (lambda/2)(q_bra + q_ket).
DeltaComb qpdf_heat(const SystemState& rho_s, const HamiltonianSchedule& sched,
                    const KrausChannel& ch, double lambda = 1.0);
// Peaks at lambda (eps_{n_N} - (eps_{i_0} + eps_{j_0}) / 2).
DeltaComb qpdf_internal_energy(const SystemState& rho_s, const HamiltonianSchedule& sched,
                               const KrausChannel& ch, double lambda = 1.0);
// Peaks at (lambda/2)(w_bra + w_ket) = (lambda/2)(q_bra + q_ket + 2 eps_{n_N} - eps_{i_0} - eps_{j_0}).
DeltaComb qpdf_work(const SystemState& rho_s, const HamiltonianSchedule& sched,
                    const KrausChannel& ch, double lambda = 1.0);

struct CombPropagationStats {
  std::size_t max_support = 0;          // labels carried at once
  std::size_t max_labels_per_entry = 0;  // nonzero labels in one (bra, ket) entry
};

// Transfer-scheme comb for the protocol of the given kind.
DeltaComb propagate_comb(const SystemState& rho_s, const HamiltonianSchedule& sched,
                         const KrausChannel& ch, double lambda, ProtocolKind kind,
                         BuildOptions build = {}, CombPropagationStats* stats = nullptr);

// Largest |dU + Q - W| over the labels of one path (lambda = 1).
double pathwise_conservation_residual(const PathPair& pair);

}  // namespace qwork
