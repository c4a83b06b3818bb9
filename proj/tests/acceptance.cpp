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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qwork/analysis.hpp"
#include "qwork/cli.hpp"
#include "qwork/error.hpp"
#include "qwork/path_sum.hpp"
#include "qwork/scenario.hpp"
#include "support/random_scenarios.hpp"

using namespace qwork;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool passed = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Worst-case tracker: value must stay at or below tol.
struct Bound {
  double worst = 0.0;
  double tol;
  explicit Bound(double t) : tol(t) {}
  void see(double v) { worst = std::max(worst, std::isnan(v) ? INFINITY : v); }
  bool ok() const { return worst <= tol; }
  std::string str() const { return sci(worst) + " (tol " + sci(tol) + ")"; }
};

double comb_gap(const DeltaComb& a, const DeltaComb& b) {
  const auto d = compare_combs(a, b, 1e-9);
  return d.unmatched ? INFINITY : d.max_weight_diff;
}

struct SuiteResult {
  testing::RandomInstance inst;
  std::array<DeltaComb, 3> combs;        // path sum, kAllProtocols order
  std::array<QcgfSamples, 3> tilted;     // default grid
  std::array<QcgfSamples, 3> joint;      // default grid
  std::array<QcgfSamples, 3> fine;       // moment grid
};

SuiteResult evaluate(const testing::RandomInstance& inst) {
  SuiteResult r{inst, {}, {}, {}, {}};
  const auto grid = default_chi_grid(inst.schedule);
  const auto fine = moment_grid(inst.schedule);
  const auto det = DetectorSpec::qubit();
  for (std::size_t k = 0; k < 3; ++k) {
    const auto kind = kAllProtocols[k];
    r.combs[k] = qpdf(kind, inst.rho, inst.schedule, inst.channel);
    r.tilted[k] = qcgf(inst.rho, det, kind, inst.channel, inst.schedule, grid);
    r.joint[k] = qcgf(inst.rho, det, kind, inst.channel, inst.schedule, grid, PropagationRoute::Joint);
    r.fine[k] = qcgf(inst.rho, det, kind, inst.channel, inst.schedule, fine);
  }
  return r;
}

Criterion energy_conservation(const std::vector<SuiteResult>& suite) {
  Criterion c{1, "energy conservation", true, {}};
  Bound avg(1e-10), path(1e-12);
  std::size_t enumerated = 0, pairs = 0;
  for (const auto& s : suite) {
    avg.see(std::abs(energy_account(s.combs[0], s.combs[1], s.combs[2]).residual));
    const auto& in = s.inst;
    if (path_pair_bound(in.schedule, in.channel) > kDefaultEnumerationCap) continue;
    ++enumerated;
    const double scale = std::max(1.0, in.schedule.max_abs_energy()) * (in.schedule.steps() + 1);
    enumerate_path_pairs(in.rho, in.schedule, in.channel, [&](const PathPair& p) {
      ++pairs;
      path.see(pathwise_conservation_residual(p) / scale);
    });
  }
  c.passed = avg.ok() && path.ok() && enumerated > 0;
  c.detail = "max |<dU>+<Q>-<W>| = " + avg.str() + " over " + std::to_string(suite.size()) +
             " instances; pathwise |dU+Q-W| / (eps (N+1)) = " + path.str() + " over " +
             std::to_string(pairs) + " pairs in " + std::to_string(enumerated) +
             " enumerable instances";
  return c;
}

Criterion route_agreement(const std::vector<SuiteResult>& suite) {
  Criterion c{2, "route agreement", true, {}};
  Bound weight(1e-8), position(1e-9), tilt(1e-12), transfer(1e-12);
  std::size_t flagged = 0, unmatched = 0;
  for (const auto& s : suite) {
    const auto& in = s.inst;
    const bool enumerable = path_pair_bound(in.schedule, in.channel) <= kDefaultEnumerationCap;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto kind = kAllProtocols[k];
      for (std::size_t i = 0; i < s.tilted[k].values.size(); ++i)
        tilt.see(std::abs(s.tilted[k].values[i] - s.joint[k].values[i]));
      const auto rec = recover_comb(s.tilted[k], candidate_values(kind, in.schedule),
                                    merge_tolerance_for(in.schedule.max_abs_energy()));
      flagged += rec.flagged;
      const auto d = compare_combs(rec.comb, s.combs[k], 1e-6);
      unmatched += d.unmatched;
      weight.see(d.max_weight_diff);
      position.see(d.max_position_diff);
      if (enumerable) {
        const auto t = propagate_comb(in.rho, in.schedule, in.channel, 1.0, kind);
        const auto e = qpdf(kind, in.rho, in.schedule, in.channel, {1.0, PathStrategy::Enumerate});
        transfer.see(comb_gap(t, e));
      }
    }
  }
  c.passed = weight.ok() && position.ok() && tilt.ok() && transfer.ok() && !flagged;
  c.detail = "recovered vs path-sum weight " + weight.str() + ", position " + position.str() +
             " (peaks present on one side only count at full weight: " + std::to_string(unmatched) +
             "), flagged fits " +
             std::to_string(flagged) + "; tilted vs joint " + tilt.str() +
             "; enumeration vs transfer " + transfer.str();
  return c;
}

Criterion closed_limit(const std::vector<SuiteResult>& suite, const RunResult& hadamard) {
  Criterion c{3, "closed limit", true, {}};
  Bound heat(1e-12), same(1e-12);
  std::size_t n = 0;
  auto check = [&](const DeltaComb& du, const DeltaComb& q, const DeltaComb& w) {
    ++n;
    heat.see(q.size() == 1 ? std::abs(q.weight_at(0.0, 1e-9) - 1.0) : INFINITY);
    same.see(comb_gap(du, w));
  };
  for (const auto& s : suite)
    if (s.inst.p == 0.0) check(s.combs[0], s.combs[1], s.combs[2]);
  check(hadamard.get(ProtocolKind::InternalEnergy).comb, hadamard.get(ProtocolKind::Heat).comb,
        hadamard.get(ProtocolKind::Work).comb);
  c.passed = heat.ok() && same.ok();
  c.detail = std::to_string(n) + " closed instances; P(Q) vs delta(0) " + heat.str() +
             "; P(dU) vs P(W) " + same.str();
  return c;
}

Criterion hadamard_benchmark(const Scenario& sc, const RunResult& r) {
  Criterion c{4, "hadamard benchmark", true, {}};
  const auto& w = r.get(ProtocolKind::Work).comb;
  const std::pair<double, double> expected[] = {
      {-1.0, 0.25}, {-0.5, 0.5}, {0.0, 0.5}, {0.5, -0.5}, {1.0, 0.25}};
  Bound peaks(1e-10), avg(1e-10);
  if (w.size() != 5) peaks.see(INFINITY);
  for (auto [f, wt] : expected) peaks.see(std::abs(w.weight_at(f, 1e-9) - wt));
  const double oracle = oracle_average_work(sc.initial, sc.schedule);
  avg.see(std::abs(comb_average(w) + 0.5));
  avg.see(std::abs(oracle + 0.5));
  c.passed = peaks.ok() && avg.ok();
  c.detail = "W comb vs reference " + peaks.str() + "; <W> = " + sci(comb_average(w)) +
             ", closed form " + sci(oracle);
  return c;
}

Criterion strong_dissipation(const std::vector<SuiteResult>& suite) {
  Criterion c{5, "strong dissipation", true, {}};
  Bound pop(1e-12), neg(1e-12);
  std::size_t n = 0;
  for (const auto& s : suite) {
    if (s.inst.p != 1.0) continue;
    const auto& sched = s.inst.schedule;
    // Coherent initial state: every comb is a probability distribution.
    for (const auto& comb : s.combs) {
      const auto rep = negativity_report(comb, s.inst.eps);
      neg.see(std::abs(rep.negative_weight));
      neg.see(rep.half_quantum_weight);
    }
    // Diagonal initial state: P(dU) = rho_gg delta(0) + rho_ee delta(dU - (eps_g - eps_e)).
    const auto diag = dephased(s.inst.rho, sched.eig(0));
    const auto du = qpdf_internal_energy(diag, sched, s.inst.channel);
    const auto rho = to_eigenbasis(diag.rho(), sched.eig(0));
    const double eg = sched.eig(0).values[0], ee = sched.eig(0).values[1];
    const auto expected = DeltaComb::from_peaks(
        {{0.0, rho(0, 0).real()}, {eg - ee, rho(1, 1).real()}}, merge_tolerance_for(s.inst.eps));
    pop.see(comb_gap(du, expected));
    for (const auto& comb : {du, qpdf_heat(diag, sched, s.inst.channel),
                             qpdf_work(diag, sched, s.inst.channel)}) {
      const auto rep = negativity_report(comb, s.inst.eps);
      neg.see(std::abs(rep.negative_weight));
      neg.see(rep.half_quantum_weight);
    }
    ++n;
  }
  c.passed = pop.ok() && neg.ok() && n > 0;
  c.detail = std::to_string(n) + " instances at p = 1; P(dU) vs population comb " + pop.str() +
             "; negativity and half-quantum weight " + neg.str();
  return c;
}

Criterion tmp_containment(const std::vector<SuiteResult>& suite) {
  Criterion c{6, "two-measurement containment", true, {}};
  Bound diff(1e-12);
  double most_negative = 0.0;
  std::size_t n = 0;
  for (const auto& s : suite) {
    if (s.inst.p != 0.0) continue;
    const auto& sched = s.inst.schedule;
    const auto tmp = tmp_distribution(s.inst.rho, sched);
    for (const auto& p : tmp.peaks()) most_negative = std::min(most_negative, p.weight);
    diff.see(comb_gap(qpdf_work(dephased(s.inst.rho, sched.eig(0)), sched, s.inst.channel), tmp));
    ++n;
  }
  c.passed = diff.ok() && most_negative >= 0.0 && n > 0;
  c.detail = std::to_string(n) + " closed instances; diagonal W comb vs TMP " + diff.str() +
             "; smallest TMP weight " + sci(most_negative);
  return c;
}

Criterion moment_consistency(const std::vector<SuiteResult>& suite) {
  Criterion c{7, "moment consistency", true, {}};
  Bound diff(1e-6);
  for (const auto& s : suite)
    for (std::size_t k = 0; k < 3; ++k)
      diff.see(std::abs(quasi_moment(s.fine[k], 1) - comb_average(s.combs[k])));
  c.passed = diff.ok();
  c.detail = "first quasi-moment vs comb average " + diff.str() + " over " +
             std::to_string(3 * suite.size()) + " QCGFs";
  return c;
}

Criterion normalization(const std::vector<SuiteResult>& suite, const std::vector<RunResult>& runs) {
  Criterion c{8, "normalization", true, {}};
  Bound sum(1e-10), g0(1e-12), mag(1e-9);
  std::size_t combs = 0, curves = 0;
  auto comb = [&](const DeltaComb& d) {
    ++combs;
    sum.see(std::abs(d.total_weight() - 1.0));
  };
  auto curve = [&](const QcgfSamples& g) {
    ++curves;
    bool has_zero = false;
    for (std::size_t i = 0; i < g.chi.size(); ++i) {
      if (g.chi[i] == 0.0) {
        has_zero = true;
        g0.see(std::abs(g.values[i] - 1.0));
      }
      mag.see(std::abs(g.values[i]) - 1.0);
    }
    if (!has_zero) g0.see(INFINITY);
  };
  for (const auto& s : suite) {
    for (const auto& d : s.combs) comb(d);
    for (const auto* set : {&s.tilted, &s.joint, &s.fine})
      for (const auto& g : *set) curve(g);
  }
  for (const auto& r : runs) {
    for (const auto& p : r.protocols) {
      comb(p.comb);
      curve(p.qcgf);
      if (p.recovery) comb(p.recovery->comb);
    }
  }
  c.passed = sum.ok() && g0.ok() && mag.ok();
  c.detail = std::to_string(combs) + " combs, total weight " + sum.str() + "; " +
             std::to_string(curves) + " QCGFs, |G(0) - 1| " + g0.str() + ", |G| - 1 " + mag.str();
  return c;
}

Criterion sweep_endpoint(const Scenario& hadamard) {
  Criterion c{9, "sweep endpoint", true, {}};
  const std::vector<double> ps{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto rows = run_sweep(hadamard, SweepParameter::DampingProbability, ps, {});
  const double at_zero = rows.front().negativity, at_one = rows.back().negativity;
  bool monotone = true;
  std::string trace;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i && std::abs(rows[i].negativity) > std::abs(rows[i - 1].negativity)) monotone = false;
    trace += (i ? ", " : "") + sci(rows[i].negativity);
  }
  c.passed = std::abs(at_one) <= 1e-12 && at_zero < 0.0;
  c.detail = "negativity over p = 0..1: [" + trace + "]; |negativity| " +
             (monotone ? "non-increasing" : "not monotone") + " (reported only)";
  return c;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Criterion> results;
  try {
    std::vector<SuiteResult> suite;
    for (const auto& inst : testing::randomized_suite()) suite.push_back(evaluate(inst));

    const Scenario had = load_bundled_scenario("hadamard_closed");
    std::vector<RunResult> runs;
    for (const auto& name : bundled_scenario_names())
      runs.push_back(run_scenario(load_bundled_scenario(name)));
    const auto it = std::find_if(runs.begin(), runs.end(),
                                 [](const RunResult& r) { return r.name == "hadamard_closed"; });

    results.push_back(energy_conservation(suite));
    results.push_back(route_agreement(suite));
    results.push_back(closed_limit(suite, *it));
    results.push_back(hadamard_benchmark(had, *it));
    results.push_back(strong_dissipation(suite));
    results.push_back(tmp_containment(suite));
    results.push_back(moment_consistency(suite));
    results.push_back(normalization(suite, runs));
    results.push_back(sweep_endpoint(had));
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance suite aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& c : results) {
    std::printf("%s  [%d] %s: %s\n", c.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                c.detail.c_str());
    failed += !c.passed;
  }
  std::printf(
      "NOTE  [5] decay lowers the internal energy, so the excited-state peak of P(dU) sits at "
      "eps_g - eps_e (negative), consistent with <dU> = -eps for a fully decayed |e>\n");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/%zu criteria passed in %.2f s\n", results.size() - failed, results.size(), secs);
  return failed ? 1 : 0;
}
