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

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/kernels_impl.hpp"
#include "qwork/error.hpp"

namespace qwork::kernels {
namespace {

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(QWORK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(QWORK_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend initial_backend() {
  if (const char* env = std::getenv("QWORK_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && cpu_supports(Backend::Avx2)) return Backend::Avx2;
    if (v == "neon" && cpu_supports(Backend::Neon)) return Backend::Neon;
  }
  if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
  if (cpu_supports(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&table_for(initial_backend())};
  return table;
}

std::atomic<Backend>& active_tag() {
  static std::atomic<Backend> tag{initial_backend()};
  return tag;
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (cpu_supports(b)) out.push_back(b);
  }
  return out;
}

const KernelTable& table_for(Backend b) {
  if (!cpu_supports(b)) {
    throw Error(ErrorCode::InvalidArgument,
                "SIMD backend '" + std::string(to_string(b)) + "' not available");
  }
  switch (b) {
#if defined(QWORK_HAVE_AVX2)
    case Backend::Avx2:
      return detail::kAvx2Table;
#endif
#if defined(QWORK_HAVE_NEON)
    case Backend::Neon:
      return detail::kNeonTable;
#endif
    default:
      return detail::kScalarTable;
  }
}

Backend active_backend() { return active_tag().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  const KernelTable& t = table_for(b);
  active_table().store(&t, std::memory_order_relaxed);
  active_tag().store(b, std::memory_order_relaxed);
}

void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "caxpy: operand lengths differ");
  }
  active_table().load(std::memory_order_relaxed)->caxpy(alpha, x.data(), y.data(), x.size());
}

void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n, std::size_t k,
             std::size_t m) {
  active_table().load(std::memory_order_relaxed)->cmatmul(a, b, c, n, k, m);
}

}  // namespace qwork::kernels
