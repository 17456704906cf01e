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

#include <cmath>
#include <complex>

#include "kpoqcr/simd/kernels.hpp"

namespace kpoqcr::simd::scalar {

namespace {

double fermi(double e, double kt) {
  if (kt == 0.0) return e < 0.0 ? 1.0 : (e > 0.0 ? 0.0 : 0.5);
  return 1.0 / (1.0 + std::exp(e / kt));
}

double dynes(double eps, double gap, double gamma) {
  if (gap == 0.0) return 1.0;
  const double gi = gamma * gap;
  // (eps + i g)^2 - gap^2 with the real part factored against cancellation.
  const std::complex<double> w((eps - gap) * (eps + gap) - gi * gi, 2.0 * eps * gi);
  const std::complex<double> z(eps, gi);
  return std::abs((z / std::sqrt(w)).real());
}

}  // namespace

void pat_integrand(const double* eps, std::size_t n, const PatArgs& args, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double e = eps[i];
    out[i] = dynes(e, args.gap, args.gamma) * fermi(-e, args.kt_s) * fermi(e + args.offset, args.kt_n);
  }
}

void cmatvec(const double* m_re, const double* m_im, const double* x_re, const double* x_im,
             std::size_t n, double* y_re, double* y_im) {
  for (std::size_t r = 0; r < n; ++r) {
    const double* ar = m_re + r * n;
    const double* ai = m_im + r * n;
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      sr += ar[c] * x_re[c] - ai[c] * x_im[c];
      si += ar[c] * x_im[c] + ai[c] * x_re[c];
    }
    y_re[r] = sr;
    y_im[r] = si;
  }
}

}  // namespace kpoqcr::simd::scalar
