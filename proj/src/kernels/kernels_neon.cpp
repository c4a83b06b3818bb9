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

#include <arm_neon.h>

#include "kernels/kernels_impl.hpp"

namespace qwork::kernels::detail {
namespace {

void caxpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t ar = vdupq_n_f64(alpha.real());
  // [-ai, +ai] so that swapped x = [im, re] yields [-ai*im, ai*re]
  const float64x2_t ai = {-alpha.imag(), alpha.imag()};
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t sw = vextq_f64(xv, xv, 1);
    float64x2_t yv = vld1q_f64(yd + 2 * i);
    yv = vfmaq_f64(yv, ar, xv);
    yv = vfmaq_f64(yv, ai, sw);
    vst1q_f64(yd + 2 * i, yv);
  }
}

void cmatmul_neon(const cplx* a, const cplx* b, cplx* c, std::size_t n, std::size_t k,
                  std::size_t m) {
  for (std::size_t i = 0; i < n * m; ++i) c[i] = cplx(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const cplx aval = a[i * k + l];
      if (aval == cplx(0.0, 0.0)) continue;
      caxpy_neon(aval, b + l * m, c + i * m, m);
    }
  }
}

}  // namespace

const KernelTable kNeonTable{&caxpy_neon, &cmatmul_neon};

}  // namespace qwork::kernels::detail
