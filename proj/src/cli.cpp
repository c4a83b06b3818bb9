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

#include "qwork/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

namespace qwork {
namespace {

InvariantCheck bounded(std::string name, double deviation, double tol) {
  return {std::move(name), deviation, tol, deviation <= tol};
}

void hadamard_checks(const Scenario& sc, const RunResult& r, const VerifyOptions& opts,
                     std::vector<VerifyRow>& rows) {
  auto add = [&](InvariantCheck c) { rows.push_back({sc.name, std::move(c)}); };
  const auto& w = r.get(ProtocolKind::Work).comb;
  const std::pair<double, double> expected[] = {
      {-1.0, 0.25}, {-0.5, 0.5}, {0.0, 0.5}, {0.5, -0.5}, {1.0, 0.25}};
  double dev = w.size() == 5 ? 0.0 : 1.0;
  for (auto [f, wt] : expected) dev = std::max(dev, std::abs(w.weight_at(f, 1e-9) - wt));
  add(bounded("work: reference comb", dev, 1e-10));
  add(bounded("work: average vs closed form",
              std::abs(r.account.avg_W - oracle_average_work(sc.initial, sc.schedule)), 1e-10));
  const auto& q = r.get(ProtocolKind::Heat).comb;
  add(bounded("closed limit: heat is a unit peak at 0",
              q.size() == 1 ? std::abs(q.weight_at(0.0, 1e-9) - 1.0) : 1.0, 1e-12));
  add(bounded("closed limit: dU comb equals W comb",
              compare_combs(r.get(ProtocolKind::InternalEnergy).comb, w).max_weight_diff, 1e-12));

  const RunOptions ro{Route::All, opts.build, opts.enumeration_cap};
  const double at_one = run_scenario(with_damping(sc, 1.0), ro).negativity();
  const double at_zero = run_scenario(with_damping(sc, 0.0), ro).negativity();
  add(bounded("sweep: negativity vanishes at p = 1", std::abs(at_one), 1e-12));
  add({"sweep: negativity present at p = 0", at_zero, 0.0, at_zero < 0.0});
}

void strong_damping_checks(const Scenario& sc, const RunResult& r, std::vector<VerifyRow>& rows) {
  auto add = [&](InvariantCheck c) { rows.push_back({sc.name, std::move(c)}); };
  add(bounded("negativity", std::abs(r.negativity()), 1e-12));
  add(bounded("half-quantum weight", r.half_quantum_weight(), 1e-12));
  // Everything ends in the ground state of the final Hamiltonian.
  const ComplexMatrix rho = to_eigenbasis(sc.initial.rho(), sc.schedule.eig(0));
  const double e_final = sc.schedule.eig(sc.schedule.steps()).values[0];
  std::vector<Peak> peaks;
  for (std::size_t i = 0; i < rho.rows(); ++i)
    peaks.push_back({e_final - sc.schedule.eig(0).values[i], rho(i, i).real()});
  const auto expected = DeltaComb::from_peaks(peaks, merge_tolerance_for(1.0));
  const auto diff = compare_combs(r.get(ProtocolKind::InternalEnergy).comb, expected, 1e-9);
  add(bounded("dU comb is the population comb", diff.unmatched ? 1.0 : diff.max_weight_diff,
              1e-12));
}

std::vector<double> validated_values(SweepParameter param, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError(0, "--values", "no sweep values given");
  for (double v : values) {
    if (param == SweepParameter::DampingProbability && !(v >= 0.0 && v <= 1.0))
      throw ConfigError(0, "--values", "p must lie in [0, 1], got " + format_double(v));
    if (param == SweepParameter::GridPoints && !(v >= 2.0 && v == std::floor(v) && v <= 1e6))
      throw ConfigError(0, "--values", "grid sizes must be integers >= 2, got " + format_double(v));
  }
  return values;
}

int report_error(const Error& e, std::ostream& err) {
  err << "qwork: " << e.what() << "\n";
  return e.code() == ErrorCode::Config ? kExitConfig : kExitInvariant;
}

bool report_invariants(const RunResult& r, std::ostream& err) {
  bool ok = true;
  for (const auto& c : check_invariants(r)) {
    if (c.passed) continue;
    ok = false;
    err << "qwork: invariant '" << c.name << "' violated in " << r.name << ": "
        << format_double(c.value) << " > " << format_double(c.tolerance) << "\n";
  }
  return ok;
}

}  // namespace

std::vector<VerifyRow> run_verify(const VerifyOptions& opts) {
  std::vector<VerifyRow> rows;
  const RunOptions ro{Route::All, opts.build, opts.enumeration_cap};
  for (const auto& name : bundled_scenario_names()) {
    const Scenario sc = load_bundled_scenario(name);
    const RunResult r = run_scenario(sc, ro);
    for (auto& c : check_invariants(r)) rows.push_back({name, std::move(c)});
    if (name == "hadamard_closed") hadamard_checks(sc, r, opts, rows);
    if (name == "strong_damping") strong_damping_checks(sc, r, rows);
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const Scenario& base, SweepParameter param,
                                const std::vector<double>& values, const RunOptions& opts) {
  std::vector<SweepRow> rows;
  for (double v : validated_values(param, values)) {
    const Scenario sc = param == SweepParameter::DampingProbability
                            ? with_damping(base, v)
                            : with_grid_points(base, static_cast<std::size_t>(v));
    const RunResult r = run_scenario(sc, opts);
    rows.push_back({v, r.account, r.negativity(), r.half_quantum_weight()});
  }
  return rows;
}

std::string sweep_csv(SweepParameter param, const std::vector<SweepRow>& rows) {
  std::string s = param == SweepParameter::DampingProbability ? "p" : "points";
  s += ",avg_dU,avg_Q,avg_W,residual,negativity,half_quantum_weight\n";
  for (const auto& r : rows) {
    for (double x : {r.parameter, r.account.avg_dU, r.account.avg_Q, r.account.avg_W,
                     r.account.residual, r.negativity})
      s += format_double(x) + ",";
    s += format_double(r.half_quantum_weight) + "\n";
  }
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-probability distributions of work, heat and internal energy", "qwork"};
  app.require_subcommand(1);

  std::string config, out_dir, route_name = "all", param;
  std::vector<double> values;
  bool flip = false;
  std::uint64_t cap = kDefaultEnumerationCap;

  const std::vector<std::string> routes{"joint", "tilted", "paths", "comb", "all"};
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write CSV/JSON outputs");
  simulate->add_option("config", config, "Scenario JSON file or bundled scenario name")
      ->required();
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter range");
  sweep->add_option("config", config, "Scenario JSON file or bundled scenario name")->required();
  sweep->add_option("--param", param, "Parameter to vary")
      ->required()
      ->check(CLI::IsMember({"p", "chi-grid"}));
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  for (auto* sub : {simulate, sweep}) {
    sub->add_option("--out-dir", out_dir, "Output directory (overrides the config)");
    sub->add_option("--route", route_name, "Computation route")->check(CLI::IsMember(routes));
  }
  auto* verify = app.add_subcommand("verify", "Run the invariant suite on bundled scenarios");
  verify->add_flag("--inject-heat-sign-flip", flip, "Test hook: corrupt the heat coupling sign");
  verify->add_option("--enum-cap", cap, "Path-pair enumeration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qwork: " << e.what() << "\n";
    return kExitConfig;
  }

  auto load = [&](const std::string& c) {
    for (const auto& name : bundled_scenario_names())
      if (name == c && !std::filesystem::exists(c)) return load_bundled_scenario(c);
    return load_scenario_file(c);
  };

  try {
    if (verify->parsed()) {
      const auto rows = run_verify({{flip}, cap});
      std::vector<const VerifyRow*> failed;
      for (const auto& row : rows) {
        out << (row.check.passed ? "PASS  " : "FAIL  ") << row.scenario << "  " << row.check.name
            << "  " << format_double(row.check.value) << " (tol " << format_double(row.check.tolerance)
            << ")\n";
        if (!row.check.passed) failed.push_back(&row);
      }
      out << rows.size() - failed.size() << "/" << rows.size() << " checks passed\n";
      for (const auto* row : failed)
        err << "qwork: verify failed: " << row->scenario << ": " << row->check.name << "\n";
      return failed.empty() ? 0 : kExitVerifyFailed;
    }

    const Scenario sc = load(config);
    const RunOptions opts{parse_route(route_name), {}, kDefaultEnumerationCap};
    const std::filesystem::path dir = out_dir.empty() ? sc.output_directory : out_dir;

    if (simulate->parsed()) {
      const RunResult r = run_scenario(sc, opts);
      for (const auto& p : write_outputs(sc, r, dir)) out << p.string() << "\n";
      return report_invariants(r, err) ? 0 : kExitInvariant;
    }

    const auto kind =
        param == "p" ? SweepParameter::DampingProbability : SweepParameter::GridPoints;
    const auto rows = run_sweep(sc, kind, values, opts);
    const std::string csv = sweep_csv(kind, rows);
    std::filesystem::create_directories(dir);
    const auto path = dir / (sc.output_prefix + "_sweep_" + (param == "p" ? "p" : "chi_grid") + ".csv");
    std::ofstream(path, std::ios::binary) << csv;
    out << csv;
    bool ok = true;
    for (const auto& r : rows) {
      if (std::abs(r.account.residual) > 1e-10) {
        err << "qwork: invariant 'energy conservation (combs)' violated at "
            << format_double(r.parameter) << "\n";
        ok = false;
      }
    }
    return ok ? 0 : kExitInvariant;
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "qwork: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace qwork
