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

#include "qwork/path_sum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwork/error.hpp"
#include "qwork/kernels.hpp"

namespace qwork {
namespace {

constexpr double kChop = 1e-15;
constexpr double kConservationTolerance = 1e-12;
// Sub-comb weights below this are dropped during transfer.
constexpr double kTransferPrune = 1e-17;

ComplexMatrix chopped(ComplexMatrix m) {
  for (auto& z : m.data()) {
    if (std::abs(z.real()) < kChop) z.real(0.0);
    if (std::abs(z.imag()) < kChop) z.imag(0.0);
  }
  return m;
}

// Everything expressed in the instantaneous eigenbasis of each step.
struct PathBasis {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<std::vector<double>> energies;
  std::vector<ComplexMatrix> step;                // U'^s, rows in basis s, cols in basis s-1
  std::vector<std::vector<ComplexMatrix>> kraus;  // nonzero operators only
  ComplexMatrix rho;

  PathBasis(const SystemState& rho_s, const HamiltonianSchedule& sched, const KrausChannel& ch)
      : d(sched.dimension()), n(sched.steps()) {
    if (rho_s.dimension() != d || ch.dimension() != d) {
      throw Error(ErrorCode::DimensionMismatch, "state, schedule and channel dimensions differ");
    }
    if (ch.num_steps() != n + 1) {
      throw Error(ErrorCode::DimensionMismatch,
                  "channel has " + std::to_string(ch.num_steps()) + " steps, schedule has " +
                      std::to_string(n + 1));
    }
    const double dt = sched.dt();
    rho = to_eigenbasis(rho_s.rho(), sched.eig(0));
    for (std::size_t s = 0; s <= n; ++s) {
      const auto& eig = sched.eig(s);
      energies.push_back(eig.values);
      ComplexMatrix u = s == 0 ? ComplexMatrix::identity(d)
                               : chopped(eig.vectors.adjoint() * sched.eig(s - 1).vectors);
      for (std::size_t i = 0; i < d; ++i) {
        const cplx ph = std::polar(1.0, -dt * eig.values[i]);
        for (std::size_t j = 0; j < d; ++j) u(i, j) *= ph;
      }
      step.push_back(std::move(u));
      std::vector<ComplexMatrix> ops;
      for (const auto& m : ch.ops(s)) {
        ComplexMatrix mm = chopped(eig.vectors.adjoint() * m * eig.vectors);
        if (mm.max_norm() > 0.0) ops.push_back(std::move(mm));
      }
      kraus.push_back(std::move(ops));
    }
  }
};

class Enumerator {
 public:
  Enumerator(const PathBasis& b, const std::function<void(const PathPair&)>& sink)
      : b_(b), sink_(sink) {
    pair_.bra_in.resize(b.n + 1);
    pair_.bra_out.resize(b.n + 1);
    pair_.ket_in.resize(b.n + 1);
    pair_.ket_out.resize(b.n + 1);
    pair_.kraus.resize(b.n + 1);
  }

  void run() {
    for (std::size_t i = 0; i < b_.d; ++i) {
      for (std::size_t j = 0; j < b_.d; ++j) {
        const cplx r = b_.rho(i, j);
        if (r == cplx{}) continue;
        pair_.bra_in[0] = i;
        pair_.ket_in[0] = j;
        Labels l;
        l.du_bra = -b_.energies[0][i];
        l.du_ket = -b_.energies[0][j];
        visit(0, b_.step[0](i, i) * r, b_.step[0](j, j), l);
      }
    }
  }

 private:
  struct Labels {
    double q_bra = 0, q_ket = 0, du_bra = 0, du_ket = 0, w_bra = 0, w_ket = 0;
  };

  // a1 includes rho; a2 is the unconjugated ket amplitude.
  void visit(std::size_t s, cplx a1, cplx a2, const Labels& l) {
    const std::size_t i = pair_.bra_in[s], j = pair_.ket_in[s];
    const auto& e = b_.energies[s];
    const auto& ops = b_.kraus[s];
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const auto& m = ops[k];
      pair_.kraus[s] = k;
      for (std::size_t nn = 0; nn < b_.d; ++nn) {
        const cplx mb = m(nn, i);
        if (mb == cplx{}) continue;
        for (std::size_t mm = 0; mm < b_.d; ++mm) {
          if (s == b_.n && mm != nn) continue;
          const cplx mk = m(mm, j);
          if (mk == cplx{}) continue;
          pair_.bra_out[s] = nn;
          pair_.ket_out[s] = mm;
          Labels next = l;
          next.q_bra += e[i] - e[nn];
          next.q_ket += e[j] - e[mm];
          if (s == b_.n) {
            next.du_bra += e[nn];
            next.du_ket += e[mm];
            emit(a1 * mb, a2 * mk, next);
          } else {
            descend(s, a1 * mb, a2 * mk, next);
          }
        }
      }
    }
  }

  void descend(std::size_t s, cplx a1, cplx a2, const Labels& l) {
    const auto& u = b_.step[s + 1];
    const auto& e1 = b_.energies[s + 1];
    const auto& e0 = b_.energies[s];
    const std::size_t nn = pair_.bra_out[s], mm = pair_.ket_out[s];
    for (std::size_t i = 0; i < b_.d; ++i) {
      const cplx ub = u(i, nn);
      if (ub == cplx{}) continue;
      for (std::size_t j = 0; j < b_.d; ++j) {
        const cplx uk = u(j, mm);
        if (uk == cplx{}) continue;
        pair_.bra_in[s + 1] = i;
        pair_.ket_in[s + 1] = j;
        Labels next = l;
        next.w_bra += e1[i] - e0[nn];
        next.w_ket += e1[j] - e0[mm];
        visit(s + 1, a1 * ub, a2 * uk, next);
      }
    }
  }

  void emit(cplx a1, cplx a2, const Labels& l) {
    pair_.amplitude = a1 * std::conj(a2);
    pair_.heat_bra = l.q_bra;
    pair_.heat_ket = l.q_ket;
    pair_.du_bra = l.du_bra;
    pair_.du_ket = l.du_ket;
    pair_.work_bra = l.w_bra;
    pair_.work_ket = l.w_ket;
    sink_(pair_);
  }

  const PathBasis& b_;
  const std::function<void(const PathPair&)>& sink_;
  PathPair pair_;
};

double bound_for(const PathBasis& b) {
  const double d2 = static_cast<double>(b.d * b.d);
  double bound = d2;
  for (std::size_t s = 0; s <= b.n; ++s) {
    bound *= static_cast<double>(b.kraus[s].size()) * d2;
    if (s >= 1) bound *= d2;
  }
  return bound;
}

void enumerate(const PathBasis& b, const std::function<void(const PathPair&)>& sink,
               std::uint64_t cap) {
  const double bound = bound_for(b);
  if (bound > static_cast<double>(cap)) {
    throw Error(ErrorCode::EnumerationCapExceeded,
                "path-pair bound " + std::to_string(bound) + " exceeds cap " + std::to_string(cap));
  }
  Enumerator(b, sink).run();
}

double energy_scale(const HamiltonianSchedule& sched) {
  return std::max(1.0, sched.max_abs_energy()) * static_cast<double>(sched.steps() + 1);
}

DeltaComb enumerated_comb(ProtocolKind kind, const SystemState& rho_s,
                          const HamiltonianSchedule& sched, const KrausChannel& ch, double lambda,
                          std::uint64_t cap) {
  const PathBasis b(rho_s, sched, ch);
  const double tol = kConservationTolerance * energy_scale(sched);
  std::vector<WeightedTerm> terms;
  enumerate(
      b,
      [&](const PathPair& p) {
        const double r = pathwise_conservation_residual(p);
        if (r > tol) {
          throw Error(ErrorCode::InvariantViolation,
                      "path pair violates dU + Q - W = 0 by " + std::to_string(r));
        }
        terms.push_back(
            {0.5 * lambda * (p.label(kind, true) + p.label(kind, false)), p.amplitude});
      },
      cap);
  return DeltaComb::from_terms(std::move(terms),
                               merge_tolerance_for(lambda * sched.max_abs_energy()));
}

// Sub-combs for every (bra, ket) entry on a shared label support:
// weight of entry e at label l is w[e * labels.size() + l].
struct CombState {
  std::size_t d;
  std::vector<double> labels;
  std::vector<cplx> w;

  std::size_t width() const { return labels.size(); }
  std::span<cplx> entry(std::size_t a, std::size_t b) {
    return std::span<cplx>(w).subspan((a * d + b) * width(), width());
  }
  std::span<const cplx> entry(std::size_t a, std::size_t b) const {
    return std::span<const cplx>(w).subspan((a * d + b) * width(), width());
  }
};

// out += A X B^dagger, label by label.
void sandwich_add(const ComplexMatrix& a, const ComplexMatrix& b, const CombState& x,
                  CombState& out, std::vector<cplx>& scratch) {
  const std::size_t d = x.d, width = x.width();
  scratch.assign(d * d * width, cplx{});
  // scratch(i, c) = sum_a A(i, a) X(a, c)
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const cplx alpha = a(i, k);
      if (alpha == cplx{}) continue;
      for (std::size_t c = 0; c < d; ++c)
        kernels::caxpy(alpha, x.entry(k, c),
                       std::span<cplx>(scratch).subspan((i * d + c) * width, width));
    }
  // out(i, j) += sum_c scratch(i, c) conj(B(j, c))
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t c = 0; c < d; ++c) {
        const cplx beta = std::conj(b(j, c));
        if (beta == cplx{}) continue;
        kernels::caxpy(beta,
                       std::span<const cplx>(scratch).subspan((i * d + c) * width, width),
                       out.entry(i, j));
      }
}

void record(const CombState& st, CombPropagationStats* stats) {
  if (!stats) return;
  stats->max_support = std::max(stats->max_support, st.width());
  for (std::size_t a = 0; a < st.d; ++a)
    for (std::size_t b = 0; b < st.d; ++b) {
      std::size_t nz = 0;
      for (const cplx z : st.entry(a, b))
        if (z != cplx{}) ++nz;
      stats->max_labels_per_entry = std::max(stats->max_labels_per_entry, nz);
    }
}

// Shifts the labels of entry (a, b) by shift(a, b) and rebuilds a common
// support, merging labels that fall within tol of each other.
template <typename Shift>
void shift_labels(CombState& st, Shift shift, double tol) {
  struct Item {
    double value;
    std::size_t entry;
    std::size_t label;
  };
  const std::size_t d = st.d, width = st.width();
  std::vector<Item> items;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const double sh = shift(a, b);
      const auto e = st.entry(a, b);
      for (std::size_t l = 0; l < width; ++l)
        if (std::abs(e[l]) >= kTransferPrune) items.push_back({st.labels[l] + sh, a * d + b, l});
    }
  std::sort(items.begin(), items.end(),
            [](const Item& x, const Item& y) { return x.value < y.value; });

  std::vector<double> labels;
  std::vector<std::size_t> slot(items.size());
  std::size_t i = 0;
  while (i < items.size()) {
    std::size_t j = i + 1;
    while (j < items.size() && items[j].value - items[j - 1].value <= tol) ++j;
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      sum += items[k].value;
      slot[k] = labels.size();
    }
    labels.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  std::vector<cplx> w(d * d * labels.size());
  for (std::size_t k = 0; k < items.size(); ++k)
    w[items[k].entry * labels.size() + slot[k]] += st.w[items[k].entry * width + items[k].label];
  st.labels = std::move(labels);
  st.w = std::move(w);
}

}  // namespace

double PathPair::label(ProtocolKind kind, bool bra) const {
  switch (kind) {
    case ProtocolKind::Heat:
      return bra ? heat_bra : heat_ket;
    case ProtocolKind::InternalEnergy:
      return bra ? du_bra : du_ket;
    case ProtocolKind::Work:
      return bra ? work_bra : work_ket;
  }
  return 0.0;
}

double pathwise_conservation_residual(const PathPair& p) {
  return std::max(std::abs(p.du_bra + p.heat_bra - p.work_bra),
                  std::abs(p.du_ket + p.heat_ket - p.work_ket));
}

double path_pair_bound(const HamiltonianSchedule& sched, const KrausChannel& ch) {
  const SystemState dummy(ComplexMatrix::identity(sched.dimension()) *
                          cplx(1.0 / static_cast<double>(sched.dimension())));
  return bound_for(PathBasis(dummy, sched, ch));
}

void enumerate_path_pairs(const SystemState& rho_s, const HamiltonianSchedule& sched,
                          const KrausChannel& ch, const std::function<void(const PathPair&)>& sink,
                          std::uint64_t cap) {
  enumerate(PathBasis(rho_s, sched, ch), sink, cap);
}

DeltaComb qpdf(ProtocolKind kind, const SystemState& rho_s, const HamiltonianSchedule& sched,
               const KrausChannel& ch, const PathSumOptions& opts) {
  switch (opts.strategy) {
    case PathStrategy::Enumerate:
      return enumerated_comb(kind, rho_s, sched, ch, opts.lambda, opts.enumeration_cap);
    case PathStrategy::Propagate:
      return propagate_comb(rho_s, sched, ch, opts.lambda, kind);
    case PathStrategy::Auto:
      break;
  }
  if (path_pair_bound(sched, ch) <= static_cast<double>(opts.enumeration_cap)) {
    return enumerated_comb(kind, rho_s, sched, ch, opts.lambda, opts.enumeration_cap);
  }
  return propagate_comb(rho_s, sched, ch, opts.lambda, kind);
}

DeltaComb qpdf_heat(const SystemState& rho_s, const HamiltonianSchedule& sched,
                    const KrausChannel& ch, double lambda) {
  return qpdf(ProtocolKind::Heat, rho_s, sched, ch, {.lambda = lambda});
}

DeltaComb qpdf_internal_energy(const SystemState& rho_s, const HamiltonianSchedule& sched,
                               const KrausChannel& ch, double lambda) {
  return qpdf(ProtocolKind::InternalEnergy, rho_s, sched, ch, {.lambda = lambda});
}

DeltaComb qpdf_work(const SystemState& rho_s, const HamiltonianSchedule& sched,
                    const KrausChannel& ch, double lambda) {
  return qpdf(ProtocolKind::Work, rho_s, sched, ch, {.lambda = lambda});
}

DeltaComb propagate_comb(const SystemState& rho_s, const HamiltonianSchedule& sched,
                         const KrausChannel& ch, double lambda, ProtocolKind kind,
                         BuildOptions build, CombPropagationStats* stats) {
  const PathBasis b(rho_s, sched, ch);
  const std::size_t d = b.d;
  const double tol = merge_tolerance_for(lambda * sched.max_abs_energy());

  CombState st{d, {0.0}, std::vector<cplx>(b.rho.data().begin(), b.rho.data().end())};
  CombState next{d, {}, {}};
  std::vector<cplx> scratch;
  std::size_t basis = 0;
  record(st, stats);

  auto require_basis = [&](const Event& ev) {
    if (ev.step != basis) {
      throw Error(ErrorCode::InvariantViolation,
                  "event at step " + std::to_string(ev.step) + " while in basis " +
                      std::to_string(basis));
    }
  };

  for (const Event& ev : build_schedule(kind, sched, build).events) {
    switch (ev.type) {
      case EventType::Unitary: {
        if (!(ev.step == basis + 1 || (ev.step == 0 && basis == 0))) {
          throw Error(ErrorCode::InvariantViolation, "unitary events out of order");
        }
        basis = ev.step;
        const auto& u = b.step[basis];
        next.labels = st.labels;
        next.w.assign(st.w.size(), cplx{});
        sandwich_add(u, u, st, next, scratch);
        std::swap(st, next);
        break;
      }
      case EventType::Dissipate: {
        require_basis(ev);
        next.labels = st.labels;
        next.w.assign(st.w.size(), cplx{});
        for (const auto& m : b.kraus[basis]) sandwich_add(m, m, st, next, scratch);
        std::swap(st, next);
        break;
      }
      case EventType::Couple: {
        require_basis(ev);
        const auto& e = b.energies[basis];
        const double f = 0.5 * lambda * ev.sign;
        shift_labels(st, [&](std::size_t a, std::size_t c) { return f * (e[a] + e[c]); }, tol);
        break;
      }
    }
    record(st, stats);
  }

  std::vector<WeightedTerm> terms;
  for (std::size_t l = 0; l < st.width(); ++l) {
    cplx w{};
    for (std::size_t a = 0; a < d; ++a) w += st.entry(a, a)[l];
    terms.push_back({st.labels[l], w});
  }
  return DeltaComb::from_terms(std::move(terms), tol);
}

}  // namespace qwork
