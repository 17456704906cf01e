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

#pragma once

#include <cstddef>

namespace kpoqcr::simd {

enum class Isa { scalar, avx2 };

/// Parameters of the photon-assisted-tunneling integrand
/// n_s(eps) f(-eps, T_S) f(eps + offset, T_N); all energies in Hz.
struct PatArgs {
  double offset = 0.0;
  double gap = 0.0;
  double gamma = 0.0;  ///< Dynes parameter
  double kt_s = 0.0;   ///< 0 selects step-function Fermi factors
  double kt_n = 0.0;
};

[[nodiscard]] bool avx2_supported();
[[nodiscard]] Isa active_isa();
[[nodiscard]] const char* isa_name(Isa isa);

/// Overrides runtime selection (tests). Requesting an unsupported ISA
/// falls back to scalar.
void force_isa(Isa isa);
/// Restores CPU-based selection.
void reset_isa();

void pat_integrand(const double* eps, std::size_t n, const PatArgs& args, double* out);

/// y = M x for a dense complex n x n matrix in split (re/im) row-major form.
void cmatvec(const double* m_re, const double* m_im, const double* x_re, const double* x_im,
             std::size_t n, double* y_re, double* y_im);

namespace scalar {
void pat_integrand(const double* eps, std::size_t n, const PatArgs& args, double* out);
void cmatvec(const double* m_re, const double* m_im, const double* x_re, const double* x_im,
             std::size_t n, double* y_re, double* y_im);
}  // namespace scalar

#if defined(KPOQCR_HAVE_AVX2)
namespace avx2 {
void pat_integrand(const double* eps, std::size_t n, const PatArgs& args, double* out);
void cmatvec(const double* m_re, const double* m_im, const double* x_re, const double* x_im,
             std::size_t n, double* y_re, double* y_im);
}  // namespace avx2
#endif

}  // namespace kpoqcr::simd
