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

#include <doctest.h>

#include <numbers>
#include <random>

#include "qwork/analysis.hpp"
#include "qwork/error.hpp"
#include "qwork/path_sum.hpp"
#include "support/random_scenarios.hpp"

using namespace qwork;

namespace {

HamiltonianSchedule hadamard() {
  const double c = 1.0 / (8.0 * std::numbers::sqrt2);
  const auto h0 = pauli::combine(0, 0, 0, -0.5);
  return HamiltonianSchedule(8 * std::numbers::pi, {h0, pauli::combine(0, c, 0, c), h0});
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

const auto kHadamardGrid = [] { return default_chi_grid(hadamard()); };

}  // namespace

TEST_CASE("comb averages") {
  CHECK(comb_average(DeltaComb::from_peaks({{0.0, 1.0}}, 1e-9)) == 0.0);
  const auto sched = hadamard();
  const auto du = qpdf_internal_energy(SystemState::plus_x(), sched, KrausChannel::identity(2, 3));
  CHECK(comb_average(du) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(comb_average(du, 2) == doctest::Approx(0.25 + 0.5 * 0.25 - 0.5 * 0.25 + 0.25));

  // Two-peak strong-dissipation comb: decay moves rho_ee to eps_g - eps_e.
  const auto c = discretize_drive([](double) { return pauli::combine(0, 0, 0, -1.0); }, 1.0, 2);
  const ComplexMatrix rho{{0.3, 0.0}, {0.0, 0.7}};
  const auto sd = qpdf_internal_energy(SystemState(rho), c, amplitude_damping_channel(c, 1.0));
  CHECK(comb_average(sd) == doctest::Approx(0.7 * (-1.0 - 1.0)));
}

TEST_CASE("Fornberg weights") {
  const double nodes[] = {-0.1, 0.0, 0.1};
  const auto w = fornberg_weights(nodes, 0.0, 1);
  CHECK(w[0] == doctest::Approx(-5.0));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(5.0));
  const auto w2 = fornberg_weights(nodes, 0.0, 2);
  CHECK(w2[0] == doctest::Approx(100.0));
  CHECK(w2[1] == doctest::Approx(-200.0));
  // Exact for polynomials up to the stencil order.
  const double x[] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto w3 = fornberg_weights(x, 0.0, 3);
  double d = 0.0;
  for (int i = 0; i < 5; ++i) d += w3[i] * std::pow(x[i], 3);
  CHECK(d == doctest::Approx(6.0));
}

TEST_CASE("quasi-moments") {
  // Weights of order n scale as h^-n, so roundoff on a constant G grows accordingly.
  QcgfSamples one{ProtocolKind::Work, 1.0, -1.0, uniform_grid(0.4, 9), std::vector<cplx>(9, 1.0)};
  for (unsigned n = 1; n <= 4; ++n) CHECK(std::abs(quasi_moment(one, n)) < 1e-10);
  CHECK(quasi_moment(one, 0) == doctest::Approx(1.0));

  const auto grid = uniform_grid(4e-3, 9);

  const auto sched = hadamard();
  const auto rho = SystemState::plus_x();
  const auto ch = KrausChannel::identity(2, 3);
  const auto g = qcgf(rho, DetectorSpec::qubit(), ProtocolKind::Work, ch, sched, grid);
  CHECK(std::abs(quasi_moment(g, 1) + 0.5) < 1e-6);

  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const auto inst = testing::random_rotating_instance(rng, 2 + rep, 0.3);
    const auto comb = qpdf_work(inst.rho, inst.schedule, inst.channel);
    const auto cg = comb_qcgf(comb, ProtocolKind::Work, moment_grid(inst.schedule));
    CHECK(std::abs(quasi_moment(cg, 2) - comb_average(comb, 2)) < 1e-4);
    CHECK(std::abs(quasi_moment(cg, 1) - comb_average(comb, 1)) < 1e-8);
  }
}

TEST_CASE("quasi-moment stencil errors") {
  const std::vector<double> no_zero{-0.3, -0.1, 0.1, 0.3};
  QcgfSamples a{ProtocolKind::Work, 1.0, -1.0, no_zero, std::vector<cplx>(4, 1.0)};
  CHECK(code_of([&] { quasi_moment(a, 1); }) == ErrorCode::GridTooCoarse);

  QcgfSamples b{ProtocolKind::Work, 1.0, -1.0, uniform_grid(0.1, 3), std::vector<cplx>(3, 1.0)};
  CHECK_NOTHROW(quasi_moment(b, 2));
  CHECK(code_of([&] { quasi_moment(b, 3); }) == ErrorCode::GridTooCoarse);
  CHECK(code_of([&] { quasi_moment(b, 5); }) == ErrorCode::InvalidArgument);

  const std::vector<double> lopsided{-0.1, 0.0, 0.2, 0.3};
  QcgfSamples c{ProtocolKind::Work, 1.0, -1.0, lopsided, std::vector<cplx>(4, 1.0)};
  CHECK(code_of([&] { quasi_moment(c, 1); }) == ErrorCode::GridTooCoarse);
}

TEST_CASE("comb recovery") {
  const auto grid = uniform_grid(5.0, 31);
  const auto single = comb_qcgf(DeltaComb::from_peaks({{0.0, 1.0}}, 1e-9), ProtocolKind::Heat, grid);
  const double zero[] = {0.0};
  const auto r1 = recover_comb(single, zero, 1e-9);
  CHECK(r1.comb.size() == 1);
  CHECK(r1.comb.peaks()[0].weight == doctest::Approx(1.0).epsilon(1e-14));

  const auto sched = hadamard();
  const auto g = qcgf(SystemState::plus_x(), DetectorSpec::qubit(), ProtocolKind::Work,
                      KrausChannel::identity(2, 3), sched, kHadamardGrid());
  CHECK(g.chi.size() == 257);
  const auto cands = candidate_values(ProtocolKind::Work, sched);
  const auto rec = recover_comb(g, cands, 1e-9);
  CHECK(!rec.flagged);
  const std::pair<double, double> expected[] = {
      {-1.0, 0.25}, {-0.5, 0.5}, {0.0, 0.5}, {0.5, -0.5}, {1.0, 0.25}};
  CHECK(rec.comb.size() == 5);
  for (auto [f, w] : expected) CHECK(std::abs(rec.comb.weight_at(f, 1e-9) - w) < 1e-8);

  // Leaving out the +1/2 candidate cannot fit G.
  std::vector<double> missing;
  for (double c : cands)
    if (std::abs(c - 0.5) > 1e-9) missing.push_back(c);
  const auto bad = recover_comb(g, missing, 1e-9);
  CHECK(bad.flagged);
  CHECK(bad.residual > kRecoveryResidualThreshold);
}

TEST_CASE("near-duplicate candidates are ill-conditioned") {
  const auto g = comb_qcgf(DeltaComb::from_peaks({{0.0, 1.0}}, 1e-9), ProtocolKind::Heat,
                           uniform_grid(1.0, 21));
  const double close[] = {0.0, 1e-12};
  CHECK(code_of([&] { recover_comb(g, close, 1e-15); }) == ErrorCode::IllConditioned);
  const double many[] = {0.0, 1.0, 2.0};
  QcgfSamples tiny{ProtocolKind::Heat, 1.0, -1.0, {0.0, 0.1}, {1.0, 1.0}};
  CHECK(code_of([&] { recover_comb(tiny, many, 1e-9); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("candidate values cover every path-sum peak") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 6; ++rep) {
    const auto sched = discretize_drive(
        linear_ramp(testing::random_hermitian(rng, 2), testing::random_hermitian(rng, 2), 1.0), 1.0,
        1 + rep % 3);
    const auto rho = testing::random_state(rng, 2);
    const auto ch = amplitude_damping_channel(sched, 0.4);
    for (ProtocolKind k : kAllProtocols) {
      const auto cands = candidate_values(k, sched);
      const auto comb = qpdf(k, rho, sched, ch);
      for (const auto& p : comb.peaks()) {
        double miss = 1e300;
        for (double c : cands) miss = std::min(miss, std::abs(c - p.value));
        INFO(to_string(k), " peak ", p.value, " weight ", p.weight);
        CHECK(miss < 1e-9);
      }
    }
  }
}

TEST_CASE("energy account") {
  const auto sched = hadamard();
  const auto ch = KrausChannel::identity(2, 3);
  const auto rho = SystemState::plus_x();
  const auto closed = energy_account(qpdf_internal_energy(rho, sched, ch), qpdf_heat(rho, sched, ch),
                                     qpdf_work(rho, sched, ch));
  CHECK(closed.avg_Q == 0.0);
  CHECK(closed.avg_dU == doctest::Approx(closed.avg_W));
  CHECK(std::abs(closed.residual) < 1e-15);

  // Complete decay of the excited state under a constant field: the system
  // supplies eps as heat and does no work.
  const double eps = 1.3;
  const auto c = discretize_drive([&](double) { return pauli::combine(0, 0, 0, -eps / 2); }, 1.0, 2);
  const auto e = SystemState::excited(c.eig(0));
  const auto damp = amplitude_damping_channel(c, 1.0);
  const auto acc = energy_account(qpdf_internal_energy(e, c, damp), qpdf_heat(e, c, damp),
                                  qpdf_work(e, c, damp));
  CHECK(acc.avg_Q == doctest::Approx(eps));
  CHECK(acc.avg_dU == doctest::Approx(-eps));
  CHECK(std::abs(acc.avg_W) < 1e-15);
  CHECK(std::abs(acc.residual) < 1e-15);
}

TEST_CASE("negativity report") {
  const auto sched = hadamard();
  const auto du = qpdf_internal_energy(SystemState::plus_x(), sched, KrausChannel::identity(2, 3));
  const auto r = negativity_report(du, ground_gap(sched));
  CHECK(r.negative_weight == doctest::Approx(-0.5));
  CHECK(r.half_quantum_weight == doctest::Approx(1.0));
  CHECK(r.peaks.size() == 5);

  const auto sd = qpdf_internal_energy(SystemState::plus_x(), sched, amplitude_damping_channel(sched, 1.0));
  const auto s = negativity_report(sd, 1.0);
  CHECK(s.negative_weight == 0.0);
  CHECK(s.half_quantum_weight == 0.0);

  std::mt19937_64 rng(33);
  const auto inst = testing::random_rotating_instance(rng, 4, 0.0);
  CHECK(negativity_report(tmp_distribution(inst.rho, inst.schedule), inst.eps).negative_weight == 0.0);
}

TEST_CASE("two-measurement distribution") {
  const auto sched = hadamard();
  const auto e = tmp_distribution(SystemState::excited(sched.eig(0)), sched);
  REQUIRE(e.size() == 2);
  CHECK(e.weight_at(-1.0, 1e-9) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.weight_at(0.0, 1e-9) == doctest::Approx(0.5).epsilon(1e-14));

  std::mt19937_64 rng(34);
  const auto h = testing::random_hermitian(rng, 2);
  const auto id = HamiltonianSchedule(2 * std::numbers::pi / (hermitian_eig(h).values[1] -
                                                               hermitian_eig(h).values[0]),
                                      {h});
  const auto trivial = tmp_distribution(testing::random_state(rng, 2), id);
  CHECK(trivial.size() == 1);
  CHECK(trivial.weight_at(0.0, 1e-9) == doctest::Approx(1.0));
}

TEST_CASE("diagonal restriction of the work comb is the two-measurement distribution") {
  std::mt19937_64 rng(35);
  for (int rep = 0; rep < 10; ++rep) {
    const auto inst = testing::random_rotating_instance(rng, 1 + rep % 6, 0.0);
    const auto tmp = tmp_distribution(inst.rho, inst.schedule);
    for (const auto& p : tmp.peaks()) CHECK(p.weight >= 0.0);
    CHECK(std::abs(tmp.total_weight() - 1.0) < 1e-12);
    const auto w = qpdf_work(dephased(inst.rho, inst.schedule.eig(0)), inst.schedule, inst.channel);
    const auto d = compare_combs(w, tmp, 1e-9);
    CHECK(d.unmatched == 0);
    CHECK(d.max_weight_diff < 1e-12);
  }
}

TEST_CASE("closed-form average work") {
  const auto sched = hadamard();
  CHECK(oracle_average_work(SystemState::plus_x(), sched) == doctest::Approx(-0.5).epsilon(1e-14));
  const auto h = pauli::combine(0, 0.4, 0.0, 0.2);
  const auto c = discretize_drive([&](double) { return h; }, 3.0, 3);
  CHECK(std::abs(oracle_average_work(SystemState::ground(c.eig(0)), c)) < 1e-14);

  std::mt19937_64 rng(36);
  for (int rep = 0; rep < 10; ++rep) {
    const auto inst = testing::random_rotating_instance(rng, 1 + rep % 8, 0.0);
    CHECK(std::abs(comb_average(qpdf_work(inst.rho, inst.schedule, inst.channel)) -
                   oracle_average_work(inst.rho, inst.schedule)) < 1e-10);
  }
}
