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

// Seeded random instances shared by the unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "qwork/model.hpp"

namespace qwork::testing {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t d);
ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t d);
SystemState random_state(std::mt19937_64& rng, std::size_t d);
std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t d);

// Two-level drive H(t) = -(eps/2) n(t).sigma with n(t) swept along the great
// circle between two random axes, so the gap stays eps at every step.
struct RandomInstance {
  std::string label;
  double eps;
  double p;
  HamiltonianSchedule schedule;
  KrausChannel channel;
  SystemState rho;
};

RandomInstance random_rotating_instance(std::mt19937_64& rng, std::size_t steps, double p);

// count instances, N in [1, 8], p cycling through {0, 0.3, 0.7, 1}.
std::vector<RandomInstance> randomized_suite(std::size_t count = 100,
                                             std::uint64_t seed = 0x5eed2026);

}  // namespace qwork::testing
