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

#include "qwork/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwork/error.hpp"

namespace qwork {
namespace {

constexpr std::size_t kMaxCandidates = 4096;
// Recovered weights below this are fitting noise.
constexpr double kRecoveryPrune = 1e-10;

std::vector<double> dedupe(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  if (out.size() > kMaxCandidates) {
    throw Error(ErrorCode::InvalidArgument,
                "more than " + std::to_string(kMaxCandidates) + " candidate peak values");
  }
  return out;
}

std::vector<double> minkowski(const std::vector<double>& a, const std::vector<double>& b,
                              double tol) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x + y);
  return dedupe(std::move(out), tol);
}

// {(lambda / 2)(x + y) : x, y in diffs}
std::vector<double> pair_sums(const std::vector<double>& diffs, double lambda, double tol) {
  std::vector<double> out;
  for (double x : diffs)
    for (double y : diffs) out.push_back(0.5 * lambda * (x + y));
  return dedupe(std::move(out), tol);
}

std::vector<double> differences(const std::vector<double>& to, const std::vector<double>& from) {
  std::vector<double> out;
  for (double a : to)
    for (double b : from) out.push_back(a - b);
  return out;
}

}  // namespace

double comb_average(const DeltaComb& c, unsigned power) {
  double s = 0.0;
  for (const auto& p : c.peaks()) s += p.weight * std::pow(p.value, static_cast<int>(power));
  return s;
}

QcgfSamples comb_qcgf(const DeltaComb& c, ProtocolKind kind, std::span<const double> grid,
                      double lambda) {
  QcgfSamples g{kind, lambda, -lambda, {grid.begin(), grid.end()}, {}};
  g.values.reserve(grid.size());
  for (double chi : grid) g.values.push_back(c.characteristic(chi));
  return g;
}

std::vector<double> moment_grid(const HamiltonianSchedule& sched) {
  const double e = sched.max_abs_energy();
  const double h = 1e-3 / (e > 0.0 ? e : 1.0);
  return uniform_grid(4.0 * h, 9);
}

std::vector<double> fornberg_weights(std::span<const double> x, double z, unsigned order) {
  const std::size_t n = x.size();
  const std::size_t m = order;
  if (n == 0 || n <= m) throw Error(ErrorCode::GridTooCoarse, "not enough stencil nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

double quasi_moment(const QcgfSamples& g, unsigned order) {
  if (order > kMaxMomentOrder) {
    throw Error(ErrorCode::InvalidArgument, "quasi-moment order above 4");
  }
  const auto& chi = g.chi;
  if (chi.empty() || chi.size() != g.values.size()) {
    throw Error(ErrorCode::GridTooCoarse, "no QCGF samples");
  }
  if (!std::is_sorted(chi.begin(), chi.end())) {
    throw Error(ErrorCode::InvalidArgument, "chi grid must be ascending");
  }
  const std::size_t c = static_cast<std::size_t>(
      std::min_element(chi.begin(), chi.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      chi.begin());
  double scale = 0.0;
  if (c + 1 < chi.size()) scale = std::abs(chi[c + 1]);
  if (c > 0) scale = std::max(scale, std::abs(chi[c - 1]));
  if (std::abs(chi[c]) > 1e-9 * scale && !(scale == 0.0 && chi[c] == 0.0)) {
    throw Error(ErrorCode::GridTooCoarse, "grid does not contain chi = 0");
  }
  std::size_t m = 0;
  while (m < kMaxMomentOrder && c >= m + 1 && c + m + 1 < chi.size()) {
    const double lo = chi[c - m - 1], hi = chi[c + m + 1];
    if (std::abs(lo + hi) > 1e-9 * hi) break;
    ++m;
  }
  if (2 * m + 1 < order + 1 || (order > 0 && m == 0)) {
    throw Error(ErrorCode::GridTooCoarse,
                "symmetric stencil of " + std::to_string(2 * m + 1) +
                    " points is too small for order " + std::to_string(order));
  }
  const std::span<const double> nodes(chi.data() + (c - m), 2 * m + 1);
  const auto w = fornberg_weights(nodes, 0.0, order);
  cplx d{};
  for (std::size_t k = 0; k < w.size(); ++k) d += w[k] * g.values[c - m + k];
  cplx factor = 1.0;
  for (unsigned k = 0; k < order; ++k) factor *= cplx(0.0, -1.0);
  return (factor * d).real();
}

std::vector<double> candidate_values(ProtocolKind kind, const HamiltonianSchedule& sched,
                                     double lambda) {
  const double tol = merge_tolerance_for(lambda * sched.max_abs_energy());
  const std::size_t n = sched.steps();
  std::vector<double> acc{0.0};
  switch (kind) {
    case ProtocolKind::Heat:
      for (std::size_t s = 0; s <= n; ++s) {
        const auto& e = sched.eig(s).values;
        acc = minkowski(acc, pair_sums(differences(e, e), lambda, tol), tol);
      }
      break;
    case ProtocolKind::InternalEnergy:
      acc = pair_sums(differences(sched.eig(n).values, sched.eig(0).values), lambda, tol);
      break;
    case ProtocolKind::Work:
      for (std::size_t s = 0; s < n; ++s) {
        const auto d = differences(sched.eig(s + 1).values, sched.eig(s).values);
        acc = minkowski(acc, pair_sums(d, lambda, tol), tol);
      }
      break;
  }
  return acc;
}

RecoveryResult recover_comb(const QcgfSamples& g, std::span<const double> candidates,
                            double merge_tol) {
  const std::size_t rows = g.chi.size(), k = candidates.size();
  if (rows != g.values.size() || rows < k || k == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "recovery needs at least as many samples (" + std::to_string(rows) +
                    ") as candidates (" + std::to_string(k) + ")");
  }
  RealMatrix a(2 * rows, k);
  std::vector<double> b(2 * rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      const double ph = g.chi[r] * candidates[j];
      a(2 * r, j) = std::cos(ph);
      a(2 * r + 1, j) = std::sin(ph);
    }
    b[2 * r] = g.values[r].real();
    b[2 * r + 1] = g.values[r].imag();
  }
  const auto sol = solve_least_squares(a, b);
  if (!(sol.condition_number <= kMaxRecoveryCondition)) {
    throw Error(ErrorCode::IllConditioned,
                "design matrix condition number " + std::to_string(sol.condition_number));
  }
  RecoveryResult out;
  out.condition_number = sol.condition_number;
  for (std::size_t r = 0; r < rows; ++r) {
    cplx model{};
    for (std::size_t j = 0; j < k; ++j) model += sol.x[j] * std::polar(1.0, g.chi[r] * candidates[j]);
    out.residual = std::max(out.residual, std::abs(model - g.values[r]));
  }
  out.flagged = out.residual > kRecoveryResidualThreshold;
  std::vector<Peak> peaks;
  for (std::size_t j = 0; j < k; ++j) peaks.push_back({candidates[j], sol.x[j]});
  out.comb = DeltaComb::from_peaks(std::move(peaks), merge_tol, kRecoveryPrune);
  return out;
}

EnergyAccount energy_account(const DeltaComb& du, const DeltaComb& q, const DeltaComb& w) {
  EnergyAccount acc;
  acc.avg_dU = comb_average(du);
  acc.avg_Q = comb_average(q);
  acc.avg_W = comb_average(w);
  acc.residual = acc.avg_dU + acc.avg_Q - acc.avg_W;
  return acc;
}

NegativityReport negativity_report(const DeltaComb& c, double gap) {
  NegativityReport r;
  const double tol = merge_tolerance_for(gap);
  for (const auto& p : c.peaks()) {
    if (p.weight < 0.0) r.negative_weight += p.weight;
    if (gap > 0.0 && std::abs(std::abs(p.value) - 0.5 * gap) <= tol)
      r.half_quantum_weight += std::abs(p.weight);
    r.peaks.push_back(p);
  }
  return r;
}

double ground_gap(const HamiltonianSchedule& sched) {
  const auto& v = sched.eig(0).values;
  return v.size() < 2 ? 0.0 : v[1] - v[0];
}

ComplexMatrix total_unitary(const HamiltonianSchedule& sched) {
  ComplexMatrix u = ComplexMatrix::identity(sched.dimension());
  for (std::size_t s = 0; s <= sched.steps(); ++s) u = expm_from_eig(sched.eig(s), sched.dt()) * u;
  return u;
}

DeltaComb tmp_distribution(const SystemState& rho_s, const HamiltonianSchedule& sched) {
  const auto& e0 = sched.eig(0);
  const auto& en = sched.eig(sched.steps());
  const ComplexMatrix u = en.vectors.adjoint() * total_unitary(sched) * e0.vectors;
  const ComplexMatrix rho = to_eigenbasis(rho_s.rho(), e0);
  std::vector<WeightedTerm> terms;
  for (std::size_t i = 0; i < sched.dimension(); ++i)
    for (std::size_t n = 0; n < sched.dimension(); ++n)
      terms.push_back({en.values[n] - e0.values[i], rho(i, i).real() * std::norm(u(n, i))});
  return DeltaComb::from_terms(std::move(terms), merge_tolerance_for(sched.max_abs_energy()));
}

double oracle_average_work(const SystemState& rho_s, const HamiltonianSchedule& sched) {
  const ComplexMatrix u = total_unitary(sched);
  const ComplexMatrix evolved = u * rho_s.rho() * u.adjoint();
  return (sched.ham(sched.steps()) * evolved).trace().real() -
         (sched.ham(0) * rho_s.rho()).trace().real();
}

}  // namespace qwork
