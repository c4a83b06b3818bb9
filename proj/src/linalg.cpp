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

#include "qwork/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qwork/error.hpp"
#include "qwork/kernels.hpp"

namespace qwork {
namespace {

template <typename T>
T conj_if_complex(const T& v) {
  if constexpr (std::is_same_v<T, cplx>) {
    return std::conj(v);
  } else {
    return v;
  }
}

void require_same_shape(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2,
                        const char* what) {
  if (r1 != r2 || c1 != c2) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(r1) + "x" + std::to_string(c1) +
                    " vs " + std::to_string(r2) + "x" + std::to_string(c2));
  }
}

}  // namespace

template <typename T>
DenseMatrix<T>::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix data length does not match shape");
  }
}

template <typename T>
DenseMatrix<T>::DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
  return m;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::diagonal(std::span<const T> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::adjoint() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = conj_if_complex((*this)(r, c));
  return out;
}

template <typename T>
T DenseMatrix<T>::trace() const {
  T acc{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
  return acc;
}

template <typename T>
double DenseMatrix<T>::max_norm() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator+=(const DenseMatrix& o) {
  require_same_shape(rows_, cols_, o.rows_, o.cols_, "matrix +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator-=(const DenseMatrix& o) {
  require_same_shape(rows_, cols_, o.rows_, o.cols_, "matrix -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator*=(T s) {
  for (auto& v : data_) v *= s;
  return *this;
}

template class DenseMatrix<cplx>;
template class DenseMatrix<double>;

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  ComplexMatrix c(a.rows(), b.cols());
  kernels::cmatmul(a.data().data(), b.data().data(), c.data().data(), a.rows(), a.cols(),
                   b.cols());
  return c;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double av = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += av * b(l, j);
    }
  return c;
}

std::vector<cplx> apply(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "apply: size mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cplx acc{};
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (!a.square()) return false;
  const double scale = std::max(1.0, a.max_norm());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c)
      if (std::abs(a(r, c) - std::conj(a(c, r))) >= tol * scale) return false;
  return true;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cplx av = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
    }
  return out;
}

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::identity(2); }
ComplexMatrix X() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix Y() { return ComplexMatrix{{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
ComplexMatrix Z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix combine(double c0, double cx, double cy, double cz) {
  return ComplexMatrix{{c0 + cz, cplx(cx, -cy)}, {cplx(cx, cy), c0 - cz}};
}
}  // namespace pauli

std::vector<cplx> HermitianEig::vector(std::size_t i) const {
  std::vector<cplx> v(vectors.rows());
  for (std::size_t r = 0; r < vectors.rows(); ++r) v[r] = vectors(r, i);
  return v;
}

HermitianEig hermitian_eig(const ComplexMatrix& h) {
  if (!h.square() || h.rows() == 0) {
    throw Error(ErrorCode::NotHermitian, "eigendecomposition needs a non-empty square matrix");
  }
  if (!is_hermitian(h)) throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
  const std::size_t n = h.rows();

  // Work on the exactly Hermitian part.
  ComplexMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = h(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
      a(c, r) = std::conj(a(r, c));
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(a.max_norm(), std::numeric_limits<double>::min());
  const double negligible = 1e-18 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= negligible) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        const double ab = std::abs(b);
        if (ab <= negligible) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const cplx phase = b / ab;
        const double zeta = (aqq - app) / (2.0 * ab);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const cplx cph = std::conj(phase);

        // A <- A J, V <- V J with J = [[c, s], [-s conj(ph), c conj(ph)]] on (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * cph * akq;
          a(k, q) = s * akp + c * cph * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * cph * vkq;
          v(k, q) = s * vkp + c * cph * vkq;
        }
        // A <- J^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, p) = app - t * ab;
        a(q, q) = aqq + t * ab;
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  HermitianEig out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = order[i];
    out.values[i] = a(src, src).real();
    double best = 0.0;
    for (std::size_t r = 0; r < n; ++r) best = std::max(best, std::abs(v(r, src)));
    std::size_t pivot = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) >= best * (1.0 - 1e-10)) {
        pivot = r;
        break;
      }
    }
    const cplx gauge = std::conj(v(pivot, src)) / std::abs(v(pivot, src));
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, i) = v(r, src) * gauge;
    out.vectors(pivot, i) = std::abs(out.vectors(pivot, i));
  }
  return out;
}

ComplexMatrix expm_from_eig(const HermitianEig& eig, double t) {
  const std::size_t n = eig.dimension();
  ComplexMatrix scaled(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      scaled(r, c) = eig.vectors(r, c) * std::polar(1.0, -t * eig.values[c]);
  return scaled * eig.vectors.adjoint();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  if (t == 0.0) {
    if (!is_hermitian(h)) throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
    return ComplexMatrix::identity(h.rows());
  }
  return expm_from_eig(hermitian_eig(h), t);
}

ComplexMatrix reconstruct(const HermitianEig& eig) {
  const std::size_t n = eig.dimension();
  ComplexMatrix scaled(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scaled(r, c) = eig.vectors(r, c) * eig.values[c];
  return scaled * eig.vectors.adjoint();
}

LeastSquaresSolution solve_least_squares(const RealMatrix& a, std::span<const double> b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "least squares: rhs length");
  if (n == 0 || m < n) {
    throw Error(ErrorCode::InvalidArgument, "least squares needs rows >= cols > 0");
  }
  // Column-major working copies.
  std::vector<std::vector<double>> u(n, std::vector<double>(m));
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) u[j][i] = a(i, j);
    v[j][j] = 1.0;
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u[p][i] * u[p][i];
          beta += u[q][i] * u[q][i];
          gamma += u[p][i] * u[q][i];
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u[p][i], uq = u[q][i];
          u[p][i] = c * up - s * uq;
          u[q][i] = s * up + c * uq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v[p][i], vq = v[q][i];
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  LeastSquaresSolution out;
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s2 = 0.0;
    for (double x : u[j]) s2 += x * x;
    sigma[j] = std::sqrt(s2);
  }
  const double smax = *std::max_element(sigma.begin(), sigma.end());
  const double smin = *std::min_element(sigma.begin(), sigma.end());
  out.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();

  out.x.assign(n, 0.0);
  const double cutoff = smax * 1e-15 * static_cast<double>(std::max(m, n));
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma[j] <= cutoff) continue;
    double ub = 0.0;
    for (std::size_t i = 0; i < m; ++i) ub += u[j][i] * b[i];
    const double coeff = ub / (sigma[j] * sigma[j]);
    for (std::size_t i = 0; i < n; ++i) out.x[i] += coeff * v[j][i];
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += a(i, j) * out.x[j];
    r2 += (ax - b[i]) * (ax - b[i]);
  }
  out.residual_norm = std::sqrt(r2);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  out.singular_values = std::move(sigma);
  return out;
}

}  // namespace qwork
