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

// The physical scenario: a driven system Hamiltonian sampled on a time grid,
// per-step Kraus channels, the detector, and the initial system state.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qwork/linalg.hpp"

namespace qwork {

using HamiltonianFn = std::function<ComplexMatrix(double t)>;

// N + 1 Hamiltonians H^s sampled at t_s = s T / N, s = 0..N, with their
// eigensystems cached. Each sample is held constant for one step of length
// dt = T / N. A single-sample schedule (N = 0) spans the whole interval T.
class HamiltonianSchedule {
 public:
  // Throws NonHermitianSample, DimensionMismatch, InvalidArgument.
  HamiltonianSchedule(double total_time, std::vector<ComplexMatrix> hams);

  double total_time() const noexcept { return total_time_; }
  std::size_t steps() const noexcept { return hams_.size() - 1; }
  std::size_t dimension() const noexcept { return hams_.front().rows(); }
  double dt() const noexcept;
  double time_at(std::size_t s) const noexcept;

  const ComplexMatrix& ham(std::size_t s) const { return hams_.at(s); }
  const HermitianEig& eig(std::size_t s) const { return eigs_.at(s); }
  std::span<const ComplexMatrix> hams() const noexcept { return hams_; }

  // Largest |eigenvalue| over all samples.
  double max_abs_energy() const;

  // Piecewise-constant step function t -> H^s for the grid point nearest t.
  HamiltonianFn step_function() const;

 private:
  double total_time_;
  std::vector<ComplexMatrix> hams_;
  std::vector<HermitianEig> eigs_;
};

// Samples h_of_t at the N + 1 grid points. Requires N >= 1 and T > 0.
HamiltonianSchedule discretize_drive(const HamiltonianFn& h_of_t, double total_time,
                                     std::size_t steps);

// H(t) = (1 - t/T) from + (t/T) to
HamiltonianFn linear_ramp(ComplexMatrix from, ComplexMatrix to, double total_time);

// Per-step Kraus operators {M^{k,s}} in the computational basis.
class KrausChannel {
 public:
  // Throws WrongDimension when an operator is not dim x dim.
  KrausChannel(std::size_t dimension, std::vector<std::vector<ComplexMatrix>> per_step);

  // M^{0,s} = I at every step.
  static KrausChannel identity(std::size_t dimension, std::size_t num_steps);
  // The same operator list at each of num_steps steps.
  static KrausChannel uniform(std::vector<ComplexMatrix> ops, std::size_t num_steps);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t num_steps() const noexcept { return per_step_.size(); }
  std::span<const ComplexMatrix> ops(std::size_t s) const { return per_step_.at(s); }

 private:
  std::size_t dimension_;
  std::vector<std::vector<ComplexMatrix>> per_step_;
};

// Amplitude damping toward the instantaneous ground state of a two-level
// Hamiltonian: in the step eigenbasis {|g>, |e>},
//   M0 = diag(1, sqrt(1-p)),  M1 = sqrt(p) |g><e|,
// rotated to the computational basis. Throws BadProbability, WrongDimension.
std::array<ComplexMatrix, 2> amplitude_damping(double p, const HermitianEig& step_eig);

// One damping probability for every step, or one per step (N + 1 values).
KrausChannel amplitude_damping_channel(const HamiltonianSchedule& sched, double p);
KrausChannel amplitude_damping_channel(const HamiltonianSchedule& sched,
                                       std::span<const double> p_per_step);

struct ChannelReport {
  std::vector<double> residuals;  // ||sum_k M^dagger M - I||_max per step (1 if empty)
  std::vector<bool> flagged;
  bool ok() const;
};

inline constexpr double kCompletenessTolerance = 1e-12;

ChannelReport validate_channel(const KrausChannel& ch);

// sum_k M rho M^dagger with the operators of step s.
ComplexMatrix apply_channel(const KrausChannel& ch, std::size_t s, const ComplexMatrix& rho);

// Detector with Hamiltonian H_D, the coherence pair (lambda, lambda') that is
// read out, and its initial density matrix.
class DetectorSpec {
 public:
  // Throws NotHermitian, InvalidArgument (lambda not an eigenvalue), ZeroCoherence.
  DetectorSpec(ComplexMatrix hamiltonian, double lambda, double lambda_prime, ComplexMatrix rho);

  // Qubit with H_D = sigma_z, (lambda, lambda') = (+1, -1), rho_D = |+x><+x|.
  static DetectorSpec qubit();

  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  double lambda() const noexcept { return lambda_; }
  double lambda_prime() const noexcept { return lambda_prime_; }
  const ComplexMatrix& rho() const noexcept { return rho_; }
  std::size_t dimension() const noexcept { return hamiltonian_.rows(); }
  std::span<const cplx> lambda_vector() const noexcept { return lambda_vec_; }
  std::span<const cplx> lambda_prime_vector() const noexcept { return lambda_prime_vec_; }
  // <lambda| rho_D |lambda'>
  cplx initial_coherence() const noexcept { return coherence_; }

 private:
  ComplexMatrix hamiltonian_;
  double lambda_;
  double lambda_prime_;
  ComplexMatrix rho_;
  std::vector<cplx> lambda_vec_;
  std::vector<cplx> lambda_prime_vec_;
  cplx coherence_;
};

// <u| m |v>
cplx matrix_element(std::span<const cplx> u, const ComplexMatrix& m, std::span<const cplx> v);

// Validated density matrix: Hermitian, unit trace, positive semidefinite.
class SystemState {
 public:
  // Throws InvalidArgument describing the violated property.
  explicit SystemState(ComplexMatrix rho);

  static SystemState ground(const HermitianEig& eig);
  // First excited eigenstate.
  static SystemState excited(const HermitianEig& eig);
  // |+x><+x| in the computational basis of a qubit.
  static SystemState plus_x();
  static SystemState pure(std::span<const cplx> psi);

  const ComplexMatrix& rho() const noexcept { return rho_; }
  std::size_t dimension() const noexcept { return rho_.rows(); }

 private:
  ComplexMatrix rho_;
};

// rho expressed in the eigenbasis: V^dagger rho V.
ComplexMatrix to_eigenbasis(const ComplexMatrix& rho, const HermitianEig& eig);
ComplexMatrix from_eigenbasis(const ComplexMatrix& rho, const HermitianEig& eig);

// Drops the coherences of rho in the eigenbasis (keeps the populations).
SystemState dephased(const SystemState& state, const HermitianEig& eig);

}  // namespace qwork
