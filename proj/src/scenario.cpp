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

#include "qwork/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qwork/bundled_scenarios.hpp"

namespace qwork {

using json = nlohmann::json;

namespace {

std::size_t line_at(std::string_view text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

// Walks the config keeping the key path so errors can point at a line.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  // Line of the last key in path that can be found in order in the text.
  std::size_t locate(const std::vector<std::string>& path) const {
    std::size_t pos = 0, found = std::string_view::npos;
    for (const auto& key : path) {
      if (key.empty() || key.front() == '[') continue;
      const auto p = text_.find("\"" + key + "\"", pos);
      if (p == std::string_view::npos) break;
      found = pos = p;
    }
    return found == std::string_view::npos ? 1 : line_at(text_, found);
  }

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string key;
    for (const auto& k : path) {
      if (!key.empty() && k.front() != '[') key += '.';
      key += k;
    }
    throw ConfigError(locate(path), key.empty() ? "<root>" : key, what);
  }

 private:
  std::string_view text_;
};

using Path = std::vector<std::string>;

Path operator/(Path p, std::string k) {
  p.push_back(std::move(k));
  return p;
}

Path at_index(Path p, std::size_t i) { return p / ("[" + std::to_string(i) + "]"); }

double number(const Reader& rd, const json& j, const Path& path) {
  if (!j.is_number()) rd.fail(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const Reader& rd, const json& j, const Path& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) rd.fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0) rd.fail(path, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

void only_keys(const Reader& rd, const json& j, const Path& path,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) rd.fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      rd.fail(path / k, "unknown key");
  }
}

const json& member(const Reader& rd, const json& j, const Path& path, const std::string& key) {
  if (!j.contains(key)) rd.fail(path, "missing required key '" + key + "'");
  return j.at(key);
}

cplx entry(const Reader& rd, const json& j, const Path& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  rd.fail(path, "matrix entry must be a number or [re, im]");
}

ComplexMatrix op(const Reader& rd, const json& j, const Path& path, std::size_t d) {
  if (j.is_object() && j.contains("pauli")) {
    only_keys(rd, j, path, {"pauli"});
    const Path pp = path / "pauli";
    const json& c = j.at("pauli");
    only_keys(rd, c, pp, {"i", "x", "y", "z"});
    if (d != 2) rd.fail(pp, "Pauli coefficients need dimension 2, config has " + std::to_string(d));
    auto coef = [&](const char* k) { return c.contains(k) ? number(rd, c.at(k), pp / k) : 0.0; };
    return pauli::combine(coef("i"), coef("x"), coef("y"), coef("z"));
  }
  if (j.is_object() && j.contains("matrix")) {
    only_keys(rd, j, path, {"matrix"});
    const Path mp = path / "matrix";
    const json& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != d) {
      rd.fail(mp, "expected " + std::to_string(d) + " rows");
    }
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      if (!rows[r].is_array() || rows[r].size() != d)
        rd.fail(at_index(mp, r), "expected " + std::to_string(d) + " entries");
      for (std::size_t c = 0; c < d; ++c) m(r, c) = entry(rd, rows[r][c], at_index(mp, r));
    }
    return m;
  }
  rd.fail(path, "operator must be {\"pauli\": {...}} or {\"matrix\": [[...]]}");
}

ComplexMatrix hermitian_op(const Reader& rd, const json& j, const Path& path, std::size_t d) {
  ComplexMatrix m = op(rd, j, path, d);
  if (!is_hermitian(m)) rd.fail(path, "operator is not Hermitian");
  return m;
}

std::size_t infer_dimension(const Reader& rd, const json& root) {
  if (root.contains("dimension")) {
    const auto d = count(rd, root.at("dimension"), {"dimension"});
    if (d < 1 || d > kMaxDimension)
      rd.fail({"dimension"}, "must lie in [1, " + std::to_string(kMaxDimension) + "]");
    return d;
  }
  const json* probe = nullptr;
  if (root.contains("hamiltonian")) {
    const json& h = root.at("hamiltonian");
    for (const char* k : {"operator", "from"})
      if (h.is_object() && h.contains(k)) probe = &h.at(k);
    if (h.is_object() && h.contains("samples") && h.at("samples").is_array() &&
        !h.at("samples").empty())
      probe = &h.at("samples")[0];
  }
  if (probe && probe->is_object()) {
    if (probe->contains("pauli")) return 2;
    if (probe->contains("matrix") && probe->at("matrix").is_array() &&
        !probe->at("matrix").empty())
      return probe->at("matrix").size();
  }
  rd.fail({"dimension"}, "cannot infer the dimension; set 'dimension'");
}

HamiltonianSchedule parse_hamiltonian(const Reader& rd, const json& root, std::size_t d) {
  const Path hp{"hamiltonian"};
  const json& h = member(rd, root, {}, "hamiltonian");
  if (!h.is_object()) rd.fail(hp, "expected an object");
  const json& type = member(rd, h, hp, "type");
  if (!type.is_string()) rd.fail(hp / "type", "expected a string");
  const std::string kind = type.get<std::string>();

  const double total_time = number(rd, member(rd, root, {}, "total_time"), {"total_time"});
  if (!(total_time > 0.0)) rd.fail({"total_time"}, "must be positive");

  auto steps = [&]() {
    const auto n = count(rd, member(rd, root, {}, "steps"), {"steps"});
    if (n < 1) rd.fail({"steps"}, "must be at least 1");
    return n;
  };

  try {
    if (kind == "constant") {
      only_keys(rd, h, hp, {"type", "operator"});
      const ComplexMatrix m = hermitian_op(rd, member(rd, h, hp, "operator"), hp / "operator", d);
      return discretize_drive([m](double) { return m; }, total_time, steps());
    }
    if (kind == "linear_ramp") {
      only_keys(rd, h, hp, {"type", "from", "to"});
      ComplexMatrix from = hermitian_op(rd, member(rd, h, hp, "from"), hp / "from", d);
      ComplexMatrix to = hermitian_op(rd, member(rd, h, hp, "to"), hp / "to", d);
      return discretize_drive(linear_ramp(std::move(from), std::move(to), total_time), total_time,
                              steps());
    }
    if (kind == "tabulated") {
      only_keys(rd, h, hp, {"type", "samples"});
      const json& samples = member(rd, h, hp, "samples");
      if (!samples.is_array() || samples.size() < 2)
        rd.fail(hp / "samples", "expected at least 2 samples");
      std::vector<ComplexMatrix> hams;
      for (std::size_t s = 0; s < samples.size(); ++s)
        hams.push_back(hermitian_op(rd, samples[s], at_index(hp / "samples", s), d));
      if (root.contains("steps") && steps() != hams.size() - 1) {
        rd.fail({"steps"}, "tabulated Hamiltonian has " + std::to_string(hams.size()) +
                               " samples, so steps must be " + std::to_string(hams.size() - 1));
      }
      return HamiltonianSchedule(total_time, std::move(hams));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rd.fail(hp, e.what());
  }
  rd.fail(hp / "type", "unknown Hamiltonian type '" + kind +
                           "' (expected constant, linear_ramp or tabulated)");
}

double probability(const Reader& rd, const json& j, const Path& path) {
  const double p = number(rd, j, path);
  if (!(p >= 0.0 && p <= 1.0)) rd.fail(path, "probability must lie in [0, 1], got " + format_double(p));
  return p;
}

KrausChannel parse_channel(const Reader& rd, const json& root, const HamiltonianSchedule& sched) {
  const std::size_t d = sched.dimension(), n = sched.steps();
  if (!root.contains("channel")) return KrausChannel::identity(d, n + 1);
  const Path cp{"channel"};
  const json& c = root.at("channel");
  if (!c.is_object()) rd.fail(cp, "expected an object");
  const json& type = member(rd, c, cp, "type");
  if (!type.is_string()) rd.fail(cp / "type", "expected a string");
  const std::string kind = type.get<std::string>();
  if (kind == "none") {
    only_keys(rd, c, cp, {"type"});
    return KrausChannel::identity(d, n + 1);
  }
  if (kind == "amplitude_damping") {
    only_keys(rd, c, cp, {"type", "p", "p_schedule"});
    if (d != 2) rd.fail(cp / "type", "amplitude damping needs dimension 2");
    if (c.contains("p") == c.contains("p_schedule"))
      rd.fail(cp, "give exactly one of 'p' and 'p_schedule'");
    if (c.contains("p")) return amplitude_damping_channel(sched, probability(rd, c.at("p"), cp / "p"));
    const json& ps = c.at("p_schedule");
    if (!ps.is_array() || ps.size() != n + 1)
      rd.fail(cp / "p_schedule", "expected " + std::to_string(n + 1) + " probabilities");
    std::vector<double> p;
    for (std::size_t s = 0; s <= n; ++s)
      p.push_back(probability(rd, ps[s], at_index(cp / "p_schedule", s)));
    return amplitude_damping_channel(sched, p);
  }
  if (kind == "kraus") {
    only_keys(rd, c, cp, {"type", "operators"});
    const json& ops = member(rd, c, cp, "operators");
    if (!ops.is_array() || ops.empty()) rd.fail(cp / "operators", "expected a nonempty list");
    std::vector<ComplexMatrix> ms;
    for (std::size_t k = 0; k < ops.size(); ++k)
      ms.push_back(op(rd, ops[k], at_index(cp / "operators", k), d));
    KrausChannel ch = KrausChannel::uniform(std::move(ms), n + 1);
    const auto report = validate_channel(ch);
    if (!report.ok()) {
      rd.fail(cp / "operators",
              "sum of M^dagger M deviates from identity by " + format_double(report.residuals[0]));
    }
    return ch;
  }
  rd.fail(cp / "type", "unknown channel type '" + kind +
                           "' (expected none, amplitude_damping or kraus)");
}

SystemState named_or_matrix_state(const Reader& rd, const json& j, const Path& path,
                                  std::size_t d, const HermitianEig* eig) {
  try {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (name == "ground" && eig) return SystemState::ground(*eig);
      if (name == "excited" && eig) {
        if (d < 2) rd.fail(path, "no excited state in dimension 1");
        return SystemState::excited(*eig);
      }
      if (name == "plus_x") {
        if (d != 2) rd.fail(path, "plus_x needs dimension 2");
        return SystemState::plus_x();
      }
      rd.fail(path, "unknown state '" + name + "'");
    }
    return SystemState(op(rd, j, path, d));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rd.fail(path, e.what());
  }
}

DetectorSpec parse_detector(const Reader& rd, const json& root) {
  if (!root.contains("detector")) return DetectorSpec::qubit();
  const Path dp{"detector"};
  const json& j = root.at("detector");
  only_keys(rd, j, dp, {"hamiltonian", "lambda", "lambda_prime", "rho"});
  const json& hj = member(rd, j, dp, "hamiltonian");
  std::size_t dd = 2;
  if (hj.is_object() && hj.contains("matrix") && hj.at("matrix").is_array())
    dd = hj.at("matrix").size();
  const ComplexMatrix h = hermitian_op(rd, hj, dp / "hamiltonian", dd);
  const double lambda = number(rd, member(rd, j, dp, "lambda"), dp / "lambda");
  const double lambda_prime = number(rd, member(rd, j, dp, "lambda_prime"), dp / "lambda_prime");
  if (std::abs(lambda + lambda_prime) > 1e-12 * std::max(1.0, std::abs(lambda)))
    rd.fail(dp / "lambda_prime", "path-sum combs require lambda_prime = -lambda");
  const json default_rho = "plus_x";
  const SystemState rho =
      named_or_matrix_state(rd, j.contains("rho") ? j.at("rho") : default_rho, dp / "rho", dd,
                            nullptr);
  try {
    return DetectorSpec(h, lambda, lambda_prime, rho.rho());
  } catch (const Error& e) {
    rd.fail(dp, e.what());
  }
}

std::vector<double> parse_grid(const Reader& rd, const json& root,
                               const HamiltonianSchedule& sched) {
  if (!root.contains("chi_grid")) return default_chi_grid(sched);
  const Path gp{"chi_grid"};
  const json& g = root.at("chi_grid");
  only_keys(rd, g, gp, {"points", "half_width", "values"});
  if (g.contains("values")) {
    if (g.contains("points") || g.contains("half_width"))
      rd.fail(gp, "'values' excludes 'points' and 'half_width'");
    const json& v = g.at("values");
    if (!v.is_array() || v.empty()) rd.fail(gp / "values", "expected a nonempty list");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number(rd, v[i], at_index(gp / "values", i)));
      if (i > 0 && !(out[i] > out[i - 1]))
        rd.fail(gp / "values", "values must be strictly increasing");
    }
    return out;
  }
  const auto def = default_chi_grid(sched);
  const std::size_t points = g.contains("points") ? count(rd, g.at("points"), gp / "points")
                                                  : def.size();
  if (points < 2) rd.fail(gp / "points", "need at least 2 points");
  double half_width = def.back();
  if (g.contains("half_width")) {
    half_width = number(rd, g.at("half_width"), gp / "half_width");
    if (!(half_width > 0.0)) rd.fail(gp / "half_width", "must be positive");
  }
  return uniform_grid(half_width, points);
}

std::vector<ProtocolKind> parse_protocols(const Reader& rd, const json& root) {
  if (!root.contains("protocols")) return {std::begin(kAllProtocols), std::end(kAllProtocols)};
  const json& p = root.at("protocols");
  if (!p.is_array() || p.empty()) rd.fail({"protocols"}, "expected a nonempty list");
  std::vector<ProtocolKind> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_string()) rd.fail(at_index({"protocols"}, i), "expected a string");
    try {
      const auto k = parse_protocol_kind(p[i].get<std::string>());
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    } catch (const Error& e) {
      rd.fail(at_index({"protocols"}, i), e.what());
    }
  }
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError(line_at(text, e.byte == 0 ? 0 : e.byte - 1), "<json>", what);
  }
}

std::string to_chars_string(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& key, const std::string& what)
    : Error(ErrorCode::Config, "line " + std::to_string(line) + ": " + key + ": " + what),
      line_(line) {}

Scenario parse_scenario(std::string_view text, std::string name) {
  const Reader rd(text);
  const json root = parse_json(text);
  only_keys(rd, root, {},
            {"name", "description", "dimension", "hamiltonian", "total_time", "steps", "channel",
             "initial_state", "detector", "protocols", "chi_grid", "outputs"});
  if (root.contains("name")) {
    if (!root.at("name").is_string()) rd.fail({"name"}, "expected a string");
    name = root.at("name").get<std::string>();
  }
  const std::size_t d = infer_dimension(rd, root);
  HamiltonianSchedule sched = parse_hamiltonian(rd, root, d);
  KrausChannel channel = parse_channel(rd, root, sched);
  const json default_state = "ground";
  SystemState initial = named_or_matrix_state(
      rd, root.contains("initial_state") ? root.at("initial_state") : default_state,
      {"initial_state"}, d, &sched.eig(0));
  DetectorSpec detector = parse_detector(rd, root);
  auto protocols = parse_protocols(rd, root);
  auto grid = parse_grid(rd, root, sched);

  std::string directory = ".", prefix = name;
  if (root.contains("outputs")) {
    const json& o = root.at("outputs");
    only_keys(rd, o, {"outputs"}, {"directory", "prefix"});
    for (auto [key, dst] : {std::pair{"directory", &directory}, std::pair{"prefix", &prefix}}) {
      if (!o.contains(key)) continue;
      if (!o.at(key).is_string() || o.at(key).get<std::string>().empty())
        rd.fail({"outputs", key}, "expected a nonempty string");
      *dst = o.at(key).get<std::string>();
    }
  }
  return Scenario{std::move(name),     std::string(text),    std::move(sched),
                  std::move(channel),  std::move(initial),   std::move(detector),
                  std::move(protocols), std::move(grid),     std::move(directory),
                  std::move(prefix)};
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.stem().string());
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, body] : bundled::kScenarios) out.emplace_back(name);
  return out;
}

Scenario load_bundled_scenario(std::string_view name) {
  for (const auto& [n, body] : bundled::kScenarios)
    if (n == name) return parse_scenario(body, std::string(n));
  throw Error(ErrorCode::InvalidArgument, "no bundled scenario named '" + std::string(name) + "'");
}

Scenario with_damping(const Scenario& base, double p) {
  json root = json::parse(base.source);
  root["channel"] = {{"type", "amplitude_damping"}, {"p", p}};
  return parse_scenario(root.dump(2), base.name);
}

Scenario with_grid_points(const Scenario& base, std::size_t points) {
  json root = json::parse(base.source);
  root["chi_grid"] = {{"points", points}};
  return parse_scenario(root.dump(2), base.name);
}

Route parse_route(std::string_view name) {
  for (Route r : {Route::Joint, Route::Tilted, Route::Paths, Route::Comb, Route::All})
    if (to_string(r) == name) return r;
  throw Error(ErrorCode::InvalidArgument, "unknown route '" + std::string(name) + "'");
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::Joint:
      return "joint";
    case Route::Tilted:
      return "tilted";
    case Route::Paths:
      return "paths";
    case Route::Comb:
      return "comb";
    case Route::All:
      return "all";
  }
  return "?";
}

const ProtocolResult& RunResult::get(ProtocolKind kind) const {
  for (const auto& p : protocols)
    if (p.kind == kind) return p;
  throw Error(ErrorCode::InvalidArgument, "protocol missing from result");
}

double RunResult::negativity() const {
  double m = 0.0;
  for (const auto& p : protocols) m = std::min(m, p.negativity.negative_weight);
  return m;
}

double RunResult::half_quantum_weight() const {
  double m = 0.0;
  for (const auto& p : protocols) m = std::max(m, p.negativity.half_quantum_weight);
  return m;
}

namespace {

ProtocolResult run_protocol(const Scenario& sc, ProtocolKind kind, const RunOptions& opts,
                            double gap) {
  const auto& sched = sc.schedule;
  const double lambda = sc.detector.lambda();
  ProtocolResult r;
  r.kind = kind;

  auto tilted = qcgf(sc.initial, sc.detector, kind, sc.channel, sched, sc.chi_grid,
                     PropagationRoute::Tilted, opts.build);
  auto joint = qcgf(sc.initial, sc.detector, kind, sc.channel, sched, sc.chi_grid,
                    PropagationRoute::Joint, opts.build);
  r.tilted_vs_joint = max_diff(tilted.values, joint.values);
  r.qcgf = opts.route == Route::Joint ? std::move(joint) : std::move(tilted);

  const bool enumerable =
      path_pair_bound(sched, sc.channel) <= static_cast<double>(opts.enumeration_cap);
  auto by_paths = [&] {
    return qpdf(kind, sc.initial, sched, sc.channel,
                {lambda, PathStrategy::Enumerate, opts.enumeration_cap});
  };
  auto by_transfer = [&] {
    return propagate_comb(sc.initial, sched, sc.channel, lambda, kind, opts.build);
  };
  if (opts.route == Route::Paths || (opts.route != Route::Comb && enumerable)) {
    r.comb = by_paths();
    r.comb_route = "paths";
    if (opts.route == Route::All)
      r.paths_vs_comb = compare_combs(r.comb, by_transfer()).max_weight_diff;
  } else {
    r.comb = by_transfer();
    r.comb_route = "comb";
  }

  for (std::size_t i = 0; i < r.qcgf.chi.size(); ++i) {
    r.forward_residual = std::max(
        r.forward_residual, std::abs(r.qcgf.values[i] - r.comb.characteristic(r.qcgf.chi[i])));
  }

  try {
    const auto candidates = candidate_values(kind, sched, lambda);
    if (candidates.size() > r.qcgf.chi.size()) {
      r.recovery_note = "more candidate values than grid points";
    } else {
      r.recovery = recover_comb(r.qcgf, candidates, r.comb.merge_tolerance());
      r.recovery_vs_paths = compare_combs(r.recovery->comb, r.comb);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditioned && e.code() != ErrorCode::InvalidArgument) throw;
    r.recovery_note = e.what();
  }
  r.negativity = negativity_report(r.comb, gap);
  return r;
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& opts) {
  RunResult res;
  res.name = sc.name;
  res.gap = ground_gap(sc.schedule);
  for (std::size_t i = 0; i < 3; ++i)
    res.protocols[i] = run_protocol(sc, kAllProtocols[i], opts, res.gap);
  res.account = energy_account(res.get(ProtocolKind::InternalEnergy).comb,
                               res.get(ProtocolKind::Heat).comb, res.get(ProtocolKind::Work).comb);
  // Same averages from the QCGFs alone, by finite differences at chi = 0.
  const auto grid = moment_grid(sc.schedule);
  double m[3];
  for (std::size_t i = 0; i < 3; ++i) {
    const auto g = qcgf(sc.initial, sc.detector, kAllProtocols[i], sc.channel, sc.schedule, grid,
                        PropagationRoute::Tilted, opts.build);
    m[i] = quasi_moment(g, 1);
  }
  res.moment_account = {m[0], m[1], m[2], m[0] + m[1] - m[2]};
  return res;
}

std::vector<InvariantCheck> check_invariants(const RunResult& r) {
  std::vector<InvariantCheck> out;
  auto add = [&](std::string name, double value, double tol) {
    out.push_back({std::move(name), value, tol, value <= tol});
  };
  for (const auto& p : r.protocols) {
    const std::string k(to_string(p.kind));
    add(k + ": comb normalization", std::abs(p.comb.total_weight() - 1.0), 1e-10);
    double g0 = 0.0, gmax = 0.0;
    bool has_zero = false;
    for (std::size_t i = 0; i < p.qcgf.chi.size(); ++i) {
      gmax = std::max(gmax, std::abs(p.qcgf.values[i]));
      if (p.qcgf.chi[i] == 0.0) {
        has_zero = true;
        g0 = std::abs(p.qcgf.values[i] - 1.0);
      }
    }
    if (has_zero) add(k + ": G(0) = 1", g0, 1e-12);
    add(k + ": |G| <= 1 excess", std::max(0.0, gmax - 1.0), 1e-9);
    add(k + ": tilted vs joint", p.tilted_vs_joint, 1e-12);
    add(k + ": QCGF vs comb", p.forward_residual, 1e-10);
    if (p.paths_vs_comb) add(k + ": enumeration vs transfer", *p.paths_vs_comb, 1e-12);
    if (p.recovery_vs_paths) {
      add(k + ": recovered weights", p.recovery_vs_paths->max_weight_diff, 1e-8);
      add(k + ": recovered positions", p.recovery_vs_paths->max_position_diff, 1e-9);
    }
  }
  add("energy conservation (combs)", std::abs(r.account.residual), 1e-10);
  add("energy conservation (QCGF moments)", std::abs(r.moment_account.residual), 1e-6);
  return out;
}

std::string format_double(double x) {
  if (x == 0.0) return "0";  // also folds -0
  return to_chars_string(x);
}

std::string comb_csv(const DeltaComb& c) {
  std::string s = "value,weight\n";
  for (const auto& p : c.peaks()) s += format_double(p.value) + "," + format_double(p.weight) + "\n";
  return s;
}

std::string qcgf_csv(const QcgfSamples& g) {
  std::string s = "chi,re,im\n";
  for (std::size_t i = 0; i < g.chi.size(); ++i) {
    s += format_double(g.chi[i]) + "," + format_double(g.values[i].real()) + "," +
         format_double(g.values[i].imag()) + "\n";
  }
  return s;
}

namespace {

// Doubles are stored as marked strings and spliced back in raw so the JSON
// uses the same number formatting as the CSVs.
std::string num(double x) { return "@@" + format_double(x) + "@@"; }

std::string splice(std::string s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto a = s.find("\"@@", i);
    if (a == std::string::npos) break;
    const auto b = s.find("@@\"", a + 3);
    out += s.substr(i, a - i);
    out += s.substr(a + 3, b - (a + 3));
    i = b + 3;
  }
  out += s.substr(i);
  return out;
}

json account_json(const EnergyAccount& a) {
  return {{"avg_dU", num(a.avg_dU)},
          {"avg_Q", num(a.avg_Q)},
          {"avg_W", num(a.avg_W)},
          {"residual", num(a.residual)}};
}

}  // namespace

std::string summary_json(const RunResult& r) {
  json j = json::object();
  j["scenario"] = r.name;
  j["avg_dU"] = num(r.account.avg_dU);
  j["avg_Q"] = num(r.account.avg_Q);
  j["avg_W"] = num(r.account.avg_W);
  j["residual"] = num(r.account.residual);
  j["negativity"] = num(r.negativity());
  j["half_quantum_weight"] = num(r.half_quantum_weight());
  j["energy_account"] = account_json(r.account);
  j["moment_account"] = account_json(r.moment_account);
  j["gap"] = num(r.gap);
  double tvj = 0.0, fwd = 0.0;
  json protocols = json::object();
  for (const auto& p : r.protocols) {
    tvj = std::max(tvj, p.tilted_vs_joint);
    fwd = std::max(fwd, p.forward_residual);
    json pj;
    pj["comb_route"] = p.comb_route;
    pj["average"] = num(comb_average(p.comb));
    pj["total_weight"] = num(p.comb.total_weight());
    pj["negativity"] = num(p.negativity.negative_weight);
    pj["half_quantum_weight"] = num(p.negativity.half_quantum_weight);
    json peaks = json::array();
    for (const auto& pk : p.comb.peaks()) peaks.push_back({num(pk.value), num(pk.weight)});
    pj["peaks"] = peaks;
    pj["tilted_vs_joint"] = num(p.tilted_vs_joint);
    pj["qcgf_vs_comb"] = num(p.forward_residual);
    pj["enumeration_vs_transfer"] = p.paths_vs_comb ? json(num(*p.paths_vs_comb)) : json(nullptr);
    if (p.recovery) {
      pj["recovery"] = {{"residual", num(p.recovery->residual)},
                        {"condition_number", num(p.recovery->condition_number)},
                        {"flagged", p.recovery->flagged},
                        {"max_weight_diff", num(p.recovery_vs_paths->max_weight_diff)},
                        {"max_position_diff", num(p.recovery_vs_paths->max_position_diff)}};
    } else {
      pj["recovery"] = {{"skipped", p.recovery_note}};
    }
    protocols[std::string(to_string(p.kind))] = pj;
  }
  j["route_residuals"] = {{"tilted_vs_joint", num(tvj)}, {"qcgf_vs_comb", num(fwd)}};
  j["protocols"] = protocols;
  return splice(j.dump(2)) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const Scenario& sc, const RunResult& r,
                                                 const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& file, const std::string& body) {
    const auto path = directory / file;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    written.push_back(path);
  };
  for (ProtocolKind k : sc.protocols) {
    const auto& p = r.get(k);
    const std::string stem = sc.output_prefix + "_" + std::string(to_string(k));
    write(stem + "_comb.csv", comb_csv(p.comb));
    write(stem + "_qcgf.csv", qcgf_csv(p.qcgf));
  }
  write(sc.output_prefix + "_summary.json", summary_json(r));
  return written;
}

}  // namespace qwork
