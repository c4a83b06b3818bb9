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

// Dense complex linear algebra for the small operators this library deals
// with (dimension <= 16): products, Kronecker products, Hermitian
// eigendecomposition by cyclic Jacobi, and exp(-i t H).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qwork {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxDimension = 16;

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data);
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const T> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  // Conjugate transpose (plain transpose for real T).
  DenseMatrix adjoint() const;
  T trace() const;
  // max_ij |a_ij|
  double max_norm() const;

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(T s);

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, T s) { return a *= s; }
  friend DenseMatrix operator*(T s, DenseMatrix a) { return a *= s; }
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = DenseMatrix<cplx>;
using RealMatrix = DenseMatrix<double>;

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

// a * x for a column vector x.
std::vector<cplx> apply(const ComplexMatrix& a, std::span<const cplx> x);

// max |a - b| entrywise; DimensionMismatch if shapes differ.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// max |A - A^dagger| < tol * max(1, max_norm(A))
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Pauli matrices and helpers for the two-level case.
namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
// c0 * I + cx * X + cy * Y + cz * Z
ComplexMatrix combine(double c0, double cx, double cy, double cz);
}  // namespace pauli

struct HermitianEig {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i belongs to values[i]

  std::size_t dimension() const noexcept { return values.size(); }
  std::vector<cplx> vector(std::size_t i) const;
};

// Cyclic Jacobi. Eigenvalues ascending, ties in original diagonal order;
// each eigenvector's largest-magnitude component (first one on ties) is made
// real and positive. Throws NotHermitian.
HermitianEig hermitian_eig(const ComplexMatrix& h);

// exp(-i t H) for Hermitian H. Throws NotHermitian.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

// exp(-i t H) from a precomputed eigensystem of H.
ComplexMatrix expm_from_eig(const HermitianEig& eig, double t);

// V diag(values) V^dagger
ComplexMatrix reconstruct(const HermitianEig& eig);

// Minimum-norm least-squares solution of a x ~= b for real a (m x n, m >= n)
// through a one-sided Jacobi SVD.
struct LeastSquaresSolution {
  std::vector<double> x;
  std::vector<double> singular_values;  // descending
  double condition_number = 0.0;        // sigma_max / sigma_min (inf if rank deficient)
  double residual_norm = 0.0;           // ||a x - b||_2
};

LeastSquaresSolution solve_least_squares(const RealMatrix& a, std::span<const double> b);

}  // namespace qwork
