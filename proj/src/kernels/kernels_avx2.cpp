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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "kernels/kernels_impl.hpp"

namespace qwork::kernels::detail {
namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul_by_scalar(__m256d ar, __m256d ai, __m256d x) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);  // [im0, re0, im1, re1]
  const __m256d t = _mm256_mul_pd(ai, swapped);
  // even lanes: ar*re - ai*im, odd lanes: ar*im + ai*re
  return _mm256_fmaddsub_pd(ar, x, t);
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    const __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul_by_scalar(ar, ai, x0)));
    _mm256_storeu_pd(yd + 2 * i + 4, _mm256_add_pd(y1, cmul_by_scalar(ar, ai, x1)));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul_by_scalar(ar, ai, x0)));
  }
  if (i < n) {
    const __m128d a_r = _mm_set1_pd(alpha.real());
    const __m128d a_i = _mm_set1_pd(alpha.imag());
    const __m128d xv = _mm_loadu_pd(xd + 2 * i);
    const __m128d sw = _mm_shuffle_pd(xv, xv, 0b01);
    const __m128d prod = _mm_fmaddsub_pd(a_r, xv, _mm_mul_pd(a_i, sw));
    _mm_storeu_pd(yd + 2 * i, _mm_add_pd(_mm_loadu_pd(yd + 2 * i), prod));
  }
}

void cmatmul_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t n, std::size_t k,
                  std::size_t m) {
  for (std::size_t i = 0; i < n * m; ++i) c[i] = cplx(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* crow = c + i * m;
    for (std::size_t l = 0; l < k; ++l) {
      const cplx aval = a[i * k + l];
      if (aval == cplx(0.0, 0.0)) continue;
      caxpy_avx2(aval, b + l * m, crow, m);
    }
  }
}

}  // namespace

const KernelTable kAvx2Table{&caxpy_avx2, &cmatmul_avx2};

}  // namespace qwork::kernels::detail
