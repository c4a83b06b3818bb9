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

#include "support/random_scenarios.hpp"

#include <array>
#include <cmath>

namespace qwork::testing {
namespace {

using Vec3 = std::array<double, 3>;

Vec3 random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  const double n = std::hypot(v[0], v[1], v[2]);
  for (auto& x : v) x /= n;
  return v;
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double dot = std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
  const double omega = std::acos(dot);
  if (omega < 1e-9) return a;
  const double sa = std::sin((1 - t) * omega) / std::sin(omega);
  const double sb = std::sin(t * omega) / std::sin(omega);
  Vec3 v{sa * a[0] + sb * b[0], sa * a[1] + sb * b[1], sa * a[2] + sb * b[2]};
  const double n = std::hypot(v[0], v[1], v[2]);
  for (auto& x : v) x /= n;
  return v;
}

}  // namespace

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t d) {
  const ComplexMatrix a = random_matrix(rng, d);
  return (a + a.adjoint()) * cplx(0.5);
}

SystemState random_state(std::mt19937_64& rng, std::size_t d) {
  const ComplexMatrix a = random_matrix(rng, d);
  ComplexMatrix rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return SystemState((rho + rho.adjoint()) * cplx(0.5));
}

std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(d);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

RandomInstance random_rotating_instance(std::mt19937_64& rng, std::size_t steps, double p) {
  std::uniform_real_distribution<double> eps_dist(0.5, 2.0), time_dist(0.5, 5.0);
  const double eps = eps_dist(rng);
  const double total_time = time_dist(rng);
  const Vec3 a = random_axis(rng), b = random_axis(rng);
  auto h = [=](double t) {
    const Vec3 n = slerp(a, b, t / total_time);
    return pauli::combine(0.0, -0.5 * eps * n[0], -0.5 * eps * n[1], -0.5 * eps * n[2]);
  };
  HamiltonianSchedule sched = discretize_drive(h, total_time, steps);
  KrausChannel ch = amplitude_damping_channel(sched, p);
  SystemState rho = random_state(rng, 2);
  std::string label = "N=" + std::to_string(steps) + " p=" + std::to_string(p) +
                      " eps=" + std::to_string(eps);
  return {std::move(label), eps, p, std::move(sched), std::move(ch), std::move(rho)};
}

std::vector<RandomInstance> randomized_suite(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> steps(1, 8);
  constexpr double kP[] = {0.0, 0.3, 0.7, 1.0};
  std::vector<RandomInstance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_rotating_instance(rng, steps(rng), kP[i % 4]));
  return out;
}

}  // namespace qwork::testing
