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

#include "qwork/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwork/error.hpp"

namespace qwork {

HamiltonianSchedule::HamiltonianSchedule(double total_time, std::vector<ComplexMatrix> hams)
    : total_time_(total_time), hams_(std::move(hams)) {
  if (!(total_time_ > 0.0) || !std::isfinite(total_time_)) {
    throw Error(ErrorCode::InvalidArgument, "total time must be positive and finite");
  }
  if (hams_.empty()) throw Error(ErrorCode::InvalidArgument, "schedule needs at least one sample");
  const std::size_t d = hams_.front().rows();
  if (d == 0 || d > kMaxDimension) {
    throw Error(ErrorCode::WrongDimension, "system dimension must be in [1, 16]");
  }
  eigs_.reserve(hams_.size());
  for (std::size_t s = 0; s < hams_.size(); ++s) {
    const auto& h = hams_[s];
    if (h.rows() != d || h.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "Hamiltonian sample " + std::to_string(s) + " has the wrong shape");
    }
    if (!is_hermitian(h)) {
      throw Error(ErrorCode::NonHermitianSample,
                  "Hamiltonian sample " + std::to_string(s) + " is not Hermitian");
    }
    eigs_.push_back(hermitian_eig(h));
  }
}

double HamiltonianSchedule::dt() const noexcept {
  return steps() == 0 ? total_time_ : total_time_ / static_cast<double>(steps());
}

double HamiltonianSchedule::time_at(std::size_t s) const noexcept {
  const std::size_t n = steps();
  if (n == 0) return 0.0;
  if (s >= n) return total_time_;
  return total_time_ * static_cast<double>(s) / static_cast<double>(n);
}

double HamiltonianSchedule::max_abs_energy() const {
  double m = 0.0;
  for (const auto& e : eigs_)
    for (double v : e.values) m = std::max(m, std::abs(v));
  return m;
}

HamiltonianFn HamiltonianSchedule::step_function() const {
  const double n = static_cast<double>(steps());
  const double total = total_time_;
  return [hams = hams_, n, total](double t) {
    if (n == 0.0) return hams.front();
    const double pos = std::clamp(t / total * n, 0.0, n);
    return hams[static_cast<std::size_t>(std::lround(pos))];
  };
}

HamiltonianSchedule discretize_drive(const HamiltonianFn& h_of_t, double total_time,
                                     std::size_t steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "discretization needs N >= 1");
  if (!(total_time > 0.0)) throw Error(ErrorCode::InvalidArgument, "total time must be positive");
  std::vector<ComplexMatrix> hams;
  hams.reserve(steps + 1);
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t =
        s == steps ? total_time : total_time * static_cast<double>(s) / static_cast<double>(steps);
    hams.push_back(h_of_t(t));
  }
  return HamiltonianSchedule(total_time, std::move(hams));
}

HamiltonianFn linear_ramp(ComplexMatrix from, ComplexMatrix to, double total_time) {
  return [from = std::move(from), to = std::move(to), total_time](double t) {
    const double x = t / total_time;
    return from * cplx(1.0 - x) + to * cplx(x);
  };
}

KrausChannel::KrausChannel(std::size_t dimension,
                           std::vector<std::vector<ComplexMatrix>> per_step)
    : dimension_(dimension), per_step_(std::move(per_step)) {
  for (std::size_t s = 0; s < per_step_.size(); ++s)
    for (const auto& m : per_step_[s])
      if (m.rows() != dimension_ || m.cols() != dimension_) {
        throw Error(ErrorCode::WrongDimension,
                    "Kraus operator at step " + std::to_string(s) + " is not " +
                        std::to_string(dimension_) + "x" + std::to_string(dimension_));
      }
}

KrausChannel KrausChannel::identity(std::size_t dimension, std::size_t num_steps) {
  return KrausChannel(dimension, std::vector<std::vector<ComplexMatrix>>(
                                     num_steps, {ComplexMatrix::identity(dimension)}));
}

KrausChannel KrausChannel::uniform(std::vector<ComplexMatrix> ops, std::size_t num_steps) {
  const std::size_t d = ops.empty() ? 0 : ops.front().rows();
  return KrausChannel(d, std::vector<std::vector<ComplexMatrix>>(num_steps, ops));
}

std::array<ComplexMatrix, 2> amplitude_damping(double p, const HermitianEig& step_eig) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::BadProbability,
                "damping probability must be in [0, 1], got " + std::to_string(p));
  }
  if (step_eig.dimension() != 2) {
    throw Error(ErrorCode::WrongDimension, "amplitude damping is defined for two-level systems");
  }
  const ComplexMatrix m0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}};
  const ComplexMatrix m1{{0.0, std::sqrt(p)}, {0.0, 0.0}};
  return {from_eigenbasis(m0, step_eig), from_eigenbasis(m1, step_eig)};
}

KrausChannel amplitude_damping_channel(const HamiltonianSchedule& sched, double p) {
  const std::vector<double> ps(sched.steps() + 1, p);
  return amplitude_damping_channel(sched, ps);
}

KrausChannel amplitude_damping_channel(const HamiltonianSchedule& sched,
                                       std::span<const double> p_per_step) {
  if (p_per_step.size() != sched.steps() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "need one damping probability per step (N + 1)");
  }
  std::vector<std::vector<ComplexMatrix>> ops;
  ops.reserve(p_per_step.size());
  for (std::size_t s = 0; s < p_per_step.size(); ++s) {
    auto [m0, m1] = amplitude_damping(p_per_step[s], sched.eig(s));
    ops.push_back({std::move(m0), std::move(m1)});
  }
  return KrausChannel(sched.dimension(), std::move(ops));
}

bool ChannelReport::ok() const {
  return std::none_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

ChannelReport validate_channel(const KrausChannel& ch) {
  ChannelReport report;
  const std::size_t d = ch.dimension();
  for (std::size_t s = 0; s < ch.num_steps(); ++s) {
    const auto ops = ch.ops(s);
    if (ops.empty()) {
      report.residuals.push_back(1.0);
      report.flagged.push_back(true);
      continue;
    }
    ComplexMatrix sum(d, d);
    for (const auto& m : ops) sum += m.adjoint() * m;
    const double r = max_abs_diff(sum, ComplexMatrix::identity(d));
    report.residuals.push_back(r);
    report.flagged.push_back(!(r < kCompletenessTolerance));
  }
  return report;
}

ComplexMatrix apply_channel(const KrausChannel& ch, std::size_t s, const ComplexMatrix& rho) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (const auto& m : ch.ops(s)) out += m * rho * m.adjoint();
  return out;
}

cplx matrix_element(std::span<const cplx> u, const ComplexMatrix& m, std::span<const cplx> v) {
  const auto mv = apply(m, v);
  cplx acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * mv[i];
  return acc;
}

namespace {

std::vector<cplx> eigenvector_for(const HermitianEig& eig, double value, const char* which) {
  const double scale = std::max(1.0, std::abs(value));
  for (std::size_t i = 0; i < eig.dimension(); ++i)
    if (std::abs(eig.values[i] - value) < 1e-12 * scale) return eig.vector(i);
  throw Error(ErrorCode::InvalidArgument,
              std::string(which) + " = " + std::to_string(value) +
                  " is not an eigenvalue of the detector Hamiltonian");
}

}  // namespace

DetectorSpec::DetectorSpec(ComplexMatrix hamiltonian, double lambda, double lambda_prime,
                           ComplexMatrix rho)
    : hamiltonian_(std::move(hamiltonian)),
      lambda_(lambda),
      lambda_prime_(lambda_prime),
      rho_(SystemState(std::move(rho)).rho()) {
  if (!is_hermitian(hamiltonian_)) {
    throw Error(ErrorCode::NotHermitian, "detector Hamiltonian is not Hermitian");
  }
  if (rho_.rows() != hamiltonian_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "detector state and Hamiltonian dimensions differ");
  }
  const auto eig = hermitian_eig(hamiltonian_);
  lambda_vec_ = eigenvector_for(eig, lambda_, "lambda");
  lambda_prime_vec_ = eigenvector_for(eig, lambda_prime_, "lambda'");
  coherence_ = matrix_element(lambda_vec_, rho_, lambda_prime_vec_);
  if (!(std::abs(coherence_) > 1e-12)) {
    throw Error(ErrorCode::ZeroCoherence,
                "initial detector coherence <lambda|rho_D|lambda'> vanishes");
  }
}

DetectorSpec DetectorSpec::qubit() {
  return DetectorSpec(pauli::Z(), 1.0, -1.0, SystemState::plus_x().rho());
}

SystemState::SystemState(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (!rho_.square() || rho_.rows() == 0 || rho_.rows() > kMaxDimension) {
    throw Error(ErrorCode::InvalidArgument, "density matrix must be square with dimension 1..16");
  }
  if (!is_hermitian(rho_)) throw Error(ErrorCode::InvalidArgument, "density matrix not Hermitian");
  const cplx tr = rho_.trace();
  if (std::abs(tr - cplx(1.0)) >= 1e-12) {
    throw Error(ErrorCode::InvalidArgument,
                "density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const auto eig = hermitian_eig(rho_);
  if (eig.values.front() <= -1e-10) {
    throw Error(ErrorCode::InvalidArgument, "density matrix is not positive semidefinite");
  }
}

SystemState SystemState::pure(std::span<const cplx> psi) {
  double norm2 = 0.0;
  for (const auto& a : psi) norm2 += std::norm(a);
  if (!(norm2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "zero state vector");
  const double scale = 1.0 / norm2;
  ComplexMatrix rho(psi.size(), psi.size());
  for (std::size_t r = 0; r < psi.size(); ++r)
    for (std::size_t c = 0; c < psi.size(); ++c) rho(r, c) = psi[r] * std::conj(psi[c]) * scale;
  return SystemState(std::move(rho));
}

SystemState SystemState::ground(const HermitianEig& eig) { return pure(eig.vector(0)); }

SystemState SystemState::excited(const HermitianEig& eig) {
  if (eig.dimension() < 2) throw Error(ErrorCode::WrongDimension, "no excited state in dimension 1");
  return pure(eig.vector(1));
}

SystemState SystemState::plus_x() {
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<cplx> psi{h, h};
  return pure(psi);
}

ComplexMatrix to_eigenbasis(const ComplexMatrix& rho, const HermitianEig& eig) {
  return eig.vectors.adjoint() * rho * eig.vectors;
}

ComplexMatrix from_eigenbasis(const ComplexMatrix& rho, const HermitianEig& eig) {
  return eig.vectors * rho * eig.vectors.adjoint();
}

SystemState dephased(const SystemState& state, const HermitianEig& eig) {
  ComplexMatrix in_basis = to_eigenbasis(state.rho(), eig);
  for (std::size_t r = 0; r < in_basis.rows(); ++r)
    for (std::size_t c = 0; c < in_basis.cols(); ++c)
      if (r != c) in_basis(r, c) = 0.0;
  ComplexMatrix back = from_eigenbasis(in_basis, eig);
  // Restore exact Hermiticity lost to rounding.
  back = (back + back.adjoint()) * cplx(0.5);
  return SystemState(std::move(back));
}

}  // namespace qwork
