// Copyright 2026 The kpoqcr Authors
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

#include "kpoqcr/simd/kernels.hpp"

namespace kpoqcr::simd {

namespace {

Isa detect() { return avx2_supported() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_supported() {
#if defined(KPOQCR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_supported()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() { current().store(detect(), std::memory_order_relaxed); }

void pat_integrand(const double* eps, std::size_t n, const PatArgs& args, double* out) {
#if defined(KPOQCR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::pat_integrand(eps, n, args, out);
    return;
  }
#endif
  scalar::pat_integrand(eps, n, args, out);
}

void cmatvec(const double* m_re, const double* m_im, const double* x_re, const double* x_im,
             std::size_t n, double* y_re, double* y_im) {
#if defined(KPOQCR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::cmatvec(m_re, m_im, x_re, x_im, n, y_re, y_im);
    return;
  }
#endif
  scalar::cmatvec(m_re, m_im, x_re, x_im, n, y_re, y_im);
}

}  // namespace kpoqcr::simd
