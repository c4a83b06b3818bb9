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

#include "kernels/kernels_impl.hpp"

namespace qwork::kernels::detail {
namespace {

void caxpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

void cmatmul_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t n, std::size_t k,
                    std::size_t m) {
  for (std::size_t i = 0; i < n * m; ++i) c[i] = cplx(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* crow = c + i * m;
    for (std::size_t l = 0; l < k; ++l) {
      const cplx aval = a[i * k + l];
      if (aval == cplx(0.0, 0.0)) continue;
      caxpy_scalar(aval, b + l * m, crow, m);
    }
  }
}

}  // namespace

const KernelTable kScalarTable{&caxpy_scalar, &cmatmul_scalar};

}  // namespace qwork::kernels::detail
