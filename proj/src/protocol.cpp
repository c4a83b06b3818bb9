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

#include "qwork/protocol.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "qwork/error.hpp"

namespace qwork {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::InternalEnergy:
      return "internal_energy";
    case ProtocolKind::Heat:
      return "heat";
    case ProtocolKind::Work:
      return "work";
  }
  return "unknown";
}

ProtocolKind parse_protocol_kind(std::string_view name) {
  if (name == "internal_energy" || name == "dU") return ProtocolKind::InternalEnergy;
  if (name == "heat" || name == "Q") return ProtocolKind::Heat;
  if (name == "work" || name == "W") return ProtocolKind::Work;
  throw Error(ErrorCode::InvalidArgument, "unknown protocol '" + std::string(name) + "'");
}

ProtocolSchedule build_schedule(ProtocolKind kind, const HamiltonianSchedule& sched,
                                BuildOptions opts) {
  const std::size_t n = sched.steps();
  ProtocolSchedule ps{kind, n, {}};
  auto& ev = ps.events;

  auto heat_steps = [&](int sign) {
    for (std::size_t s = 0; s <= n; ++s) {
      ev.push_back(Event::unitary(s));
      ev.push_back(Event::couple(+sign, s));
      ev.push_back(Event::dissipate(s));
      ev.push_back(Event::couple(-sign, s));
    }
  };

  switch (kind) {
    case ProtocolKind::InternalEnergy:
      ev.push_back(Event::couple(-1, 0));
      for (std::size_t s = 0; s <= n; ++s) {
        ev.push_back(Event::unitary(s));
        ev.push_back(Event::dissipate(s));
      }
      ev.push_back(Event::couple(+1, n));
      break;
    case ProtocolKind::Heat:
      heat_steps(opts.flip_heat_coupling_sign ? -1 : +1);
      break;
    case ProtocolKind::Work:
      ev.push_back(Event::couple(-1, 0));
      heat_steps(+1);
      ev.push_back(Event::couple(+1, n));
      break;
  }
  return ps;
}

namespace {

void check_dimensions(const SystemState& rho_s, const ProtocolSchedule& ps, const KrausChannel& ch,
                      const HamiltonianSchedule& sched) {
  const std::size_t d = sched.dimension();
  if (rho_s.dimension() != d) {
    throw Error(ErrorCode::DimensionMismatch, "initial state and Hamiltonian dimensions differ");
  }
  if (ch.dimension() != d) {
    throw Error(ErrorCode::DimensionMismatch, "channel and Hamiltonian dimensions differ");
  }
  if (ch.num_steps() != sched.steps() + 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "channel has " + std::to_string(ch.num_steps()) + " steps, schedule has " +
                    std::to_string(sched.steps() + 1));
  }
  if (ps.steps != sched.steps()) {
    throw Error(ErrorCode::DimensionMismatch, "protocol was built for a different schedule");
  }
}

void check_trace(const ComplexMatrix& rho, double expected_abs, std::size_t event_index) {
  if (std::abs(std::abs(rho.trace()) - expected_abs) > 1e-10) {
    throw Error(ErrorCode::InvariantViolation,
                "trace not preserved after event " + std::to_string(event_index) +
                    " (is the channel complete?)");
  }
}

}  // namespace

ComplexMatrix propagate_joint(const SystemState& rho_s, const DetectorSpec& det,
                              const ProtocolSchedule& ps, const KrausChannel& ch,
                              const HamiltonianSchedule& sched, double chi) {
  check_dimensions(rho_s, ps, ch, sched);
  const std::size_t dd = det.dimension();
  const ComplexMatrix id_d = ComplexMatrix::identity(dd);
  ComplexMatrix rho = tensor_product(rho_s.rho(), det.rho());

  for (std::size_t e = 0; e < ps.events.size(); ++e) {
    const Event& ev = ps.events[e];
    switch (ev.type) {
      case EventType::Couple: {
        const ComplexMatrix coupling = tensor_product(sched.ham(ev.step), det.hamiltonian());
        // exp(sign * i (chi/2) H (x) H_D) = exp(-i t K) with t = -sign chi / 2
        const ComplexMatrix v = expm_hermitian(coupling, -ev.sign * chi / 2.0);
        rho = v * rho * v.adjoint();
        break;
      }
      case EventType::Unitary: {
        const ComplexMatrix u =
            tensor_product(expm_hermitian(sched.ham(ev.step), sched.dt()), id_d);
        rho = u * rho * u.adjoint();
        break;
      }
      case EventType::Dissipate: {
        ComplexMatrix next(rho.rows(), rho.cols());
        for (const auto& m : ch.ops(ev.step)) {
          const ComplexMatrix mm = tensor_product(m, id_d);
          next += mm * rho * mm.adjoint();
        }
        rho = std::move(next);
        break;
      }
    }
    check_trace(rho, 1.0, e);
  }
  return rho;
}

ComplexMatrix propagate_tilted(const SystemState& rho_s, const DetectorSpec& det,
                               const ProtocolSchedule& ps, const KrausChannel& ch,
                               const HamiltonianSchedule& sched, double chi) {
  check_dimensions(rho_s, ps, ch, sched);
  const double lam = det.lambda(), lamp = det.lambda_prime();
  ComplexMatrix block = rho_s.rho();

  for (const Event& ev : ps.events) {
    switch (ev.type) {
      case EventType::Couple: {
        const HermitianEig& eig = sched.eig(ev.step);
        // left exp(+sign i (chi/2) lambda H), right exp(-sign i (chi/2) lambda' H)
        const ComplexMatrix left = expm_from_eig(eig, -ev.sign * chi * lam / 2.0);
        const ComplexMatrix right = expm_from_eig(eig, ev.sign * chi * lamp / 2.0);
        block = left * block * right;
        break;
      }
      case EventType::Unitary: {
        const ComplexMatrix u = expm_from_eig(sched.eig(ev.step), sched.dt());
        block = u * block * u.adjoint();
        break;
      }
      case EventType::Dissipate: {
        ComplexMatrix next(block.rows(), block.cols());
        for (const auto& m : ch.ops(ev.step)) next += m * block * m.adjoint();
        block = std::move(next);
        break;
      }
    }
  }
  return block;
}

cplx coherence_ratio(const ComplexMatrix& joint, const DetectorSpec& det) {
  const std::size_t dd = det.dimension();
  if (joint.rows() % dd != 0) {
    throw Error(ErrorCode::DimensionMismatch, "joint state not divisible by detector dimension");
  }
  const std::size_t d = joint.rows() / dd;
  ComplexMatrix rho_d(dd, dd);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t x = 0; x < dd; ++x)
      for (std::size_t y = 0; y < dd; ++y) rho_d(x, y) += joint(a * dd + x, a * dd + y);
  return matrix_element(det.lambda_vector(), rho_d, det.lambda_prime_vector()) /
         det.initial_coherence();
}

QcgfSamples qcgf(const SystemState& rho_s, const DetectorSpec& det, ProtocolKind kind,
                 const KrausChannel& ch, const HamiltonianSchedule& sched,
                 std::span<const double> chi_grid, PropagationRoute route, BuildOptions opts) {
  if (chi_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty chi grid");
  const ProtocolSchedule ps = build_schedule(kind, sched, opts);
  QcgfSamples out{kind, det.lambda(), det.lambda_prime(), {chi_grid.begin(), chi_grid.end()}, {}};
  out.values.reserve(chi_grid.size());
  for (double chi : chi_grid) {
    if (route == PropagationRoute::Joint) {
      out.values.push_back(coherence_ratio(propagate_joint(rho_s, det, ps, ch, sched, chi), det));
    } else {
      out.values.push_back(propagate_tilted(rho_s, det, ps, ch, sched, chi).trace());
    }
  }
  return out;
}

std::vector<double> uniform_grid(double half_width, std::size_t points) {
  if (points < 2 || !(half_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs >= 2 points and a positive half width");
  }
  std::vector<double> g(points);
  const double denom = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = half_width * (2.0 * static_cast<double>(i) - denom) / denom;
  }
  return g;
}

std::vector<double> default_chi_grid(const HamiltonianSchedule& sched) {
  const double emax = sched.max_abs_energy();
  const double half_width = emax > 1e-12 ? 4.0 * std::numbers::pi / emax : 4.0 * std::numbers::pi;
  return uniform_grid(half_width, 257);
}

}  // namespace qwork
