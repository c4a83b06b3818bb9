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

// Data-parallel inner loops shared by the dense algebra and the comb
// transfer. Each kernel has a scalar reference implementation and, where the
// target supports it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The
// variant is chosen once at startup from the CPU features; tests pin the
// backend explicitly to check the variants against the reference.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qwork::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend b);

// Backends compiled into this build and supported by the running CPU.
std::vector<Backend> available_backends();

Backend active_backend();

// Throws qwork::Error(InvalidArgument) if the backend is not available.
// QWORK_SIMD=scalar|avx2|neon in the environment picks the initial backend.
void set_backend(Backend b);

// y += alpha * x
void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

// c = a * b for row-major a (n x k), b (k x m), c (n x m).
void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n, std::size_t k, std::size_t m);

// Function table used by the dispatcher; one instance per backend.
struct KernelTable {
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  void (*cmatmul)(const cplx* a, const cplx* b, cplx* c, std::size_t n, std::size_t k,
                  std::size_t m);
};

const KernelTable& table_for(Backend b);

}  // namespace qwork::kernels
