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

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "kpoqcr/simd/kernels.hpp"

namespace kpoqcr::simd::avx2 {

namespace {

// exp(x) for x clamped to [-708, 708]: Cody-Waite reduction by ln2, then a
// degree-12 Taylor polynomial on |r| <= ln2/2 and exponent-field scaling.
// Inputs below -708 return 0 (no subnormals).
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(708.0);
  const __m256d keep = _mm256_cmp_pd(x, lo, _CMP_GE_OQ);
  x = _mm256_max_pd(lo, _mm256_min_pd(hi, x));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634074)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.90821492927058770002e-10), r);

  static constexpr double kInvFact[13] = {
      1.0,
      1.0,
      1.0 / 2.0,
      1.0 / 6.0,
      1.0 / 24.0,
      1.0 / 120.0,
      1.0 / 720.0,
      1.0 / 5040.0,
      1.0 / 40320.0,
      1.0 / 362880.0,
      1.0 / 3628800.0,
      1.0 / 39916800.0,
      1.0 / 479001600.0,
  };
  __m256d p = _mm256_set1_pd(kInvFact[12]);
  for (int k = 11; k >= 0; --k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[k]));

  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i bits = _mm256_cvtepi32_epi64(n32);
  bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
  return _mm256_and_pd(keep, _mm256_mul_pd(p, _mm256_castsi256_pd(bits)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline __m256d fermi_pd(__m256d e, double kt) {
  const __m256d one = _mm256_set1_pd(1.0);
  if (kt == 0.0) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d lt = _mm256_cmp_pd(e, zero, _CMP_LT_OQ);
    const __m256d eq = _mm256_cmp_pd(e, zero, _CMP_EQ_OQ);
    return _mm256_add_pd(_mm256_and_pd(lt, one), _mm256_and_pd(eq, _mm256_set1_pd(0.5)));
  }
  // t = exp(-|x|); f = t / (1 + t) for x > 0, else 1 / (1 + t).
  const __m256d x = _mm256_div_pd(e, _mm256_set1_pd(kt));
  const __m256d t = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), abs_pd(x)));
  const __m256d den = _mm256_add_pd(one, t);
  const __m256d pos = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_GT_OQ);
  return _mm256_div_pd(_mm256_blendv_pd(one, t, pos), den);
}


// |Re{(eps + i g)/sqrt((eps + i g)^2 - gap^2)}| with the principal branch.
inline __m256d dynes_pd(__m256d eps, double gap, double gamma) {
  if (gap == 0.0) return _mm256_set1_pd(1.0);
  const double gi = gamma * gap;
  const __m256d vgap = _mm256_set1_pd(gap);
  const __m256d vgi = _mm256_set1_pd(gi);
  const __m256d a = _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(eps, vgap), _mm256_add_pd(eps, vgap)),
                                  _mm256_set1_pd(gi * gi));
  const __m256d b = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), eps), vgi);
  const __m256d r = _mm256_sqrt_pd(_mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b)));
  const __m256d t = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_add_pd(r, abs_pd(a)), _mm256_set1_pd(0.5)));
  const __m256d q = _mm256_div_pd(b, _mm256_add_pd(t, t));
  const __m256d a_nonneg = _mm256_cmp_pd(a, _mm256_setzero_pd(), _CMP_GE_OQ);
  const __m256d sign_b = _mm256_and_pd(b, _mm256_set1_pd(-0.0));
  const __m256d sr = _mm256_blendv_pd(abs_pd(q), t, a_nonneg);
  const __m256d si = _mm256_blendv_pd(_mm256_or_pd(t, sign_b), q, a_nonneg);
  const __m256d num = _mm256_fmadd_pd(eps, sr, _mm256_mul_pd(vgi, si));
  return abs_pd(_mm256_div_pd(num, r));
}

inline __m256d integrand_pd(__m256d e, const PatArgs& args) {
  const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), e);
  const __m256d shifted = _mm256_add_pd(e, _mm256_set1_pd(args.offset));
  return _mm256_mul_pd(_mm256_mul_pd(dynes_pd(e, args.gap, args.gamma), fermi_pd(neg, args.kt_s)),
                       fermi_pd(shifted, args.kt_n));
}

}  // namespace

void pat_integrand(const double* eps, std::size_t n, const PatArgs& args, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, integrand_pd(_mm256_loadu_pd(eps + i), args));
  if (i < n) {
    alignas(32) double in[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double res[4];
    for (std::size_t k = i; k < n; ++k) in[k - i] = eps[k];
    _mm256_store_pd(res, integrand_pd(_mm256_load_pd(in), args));
    for (std::size_t k = i; k < n; ++k) out[k] = res[k - i];
  }
}

void cmatvec(const double* m_re, const double* m_im, const double* x_re, const double* x_im,
             std::size_t n, double* y_re, double* y_im) {
  for (std::size_t r = 0; r < n; ++r) {
    const double* ar = m_re + r * n;
    const double* ai = m_im + r * n;
    __m256d acc_r = _mm256_setzero_pd();
    __m256d acc_i = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= n; c += 4) {
      const __m256d mr = _mm256_loadu_pd(ar + c);
      const __m256d mi = _mm256_loadu_pd(ai + c);
      const __m256d xr = _mm256_loadu_pd(x_re + c);
      const __m256d xi = _mm256_loadu_pd(x_im + c);
      acc_r = _mm256_fmadd_pd(mr, xr, acc_r);
      acc_r = _mm256_fnmadd_pd(mi, xi, acc_r);
      acc_i = _mm256_fmadd_pd(mr, xi, acc_i);
      acc_i = _mm256_fmadd_pd(mi, xr, acc_i);
    }
    alignas(32) double lr[4];
    alignas(32) double li[4];
    _mm256_store_pd(lr, acc_r);
    _mm256_store_pd(li, acc_i);
    double sr = (lr[0] + lr[1]) + (lr[2] + lr[3]);
    double si = (li[0] + li[1]) + (li[2] + li[3]);
    for (; c < n; ++c) {
      sr += ar[c] * x_re[c] - ai[c] * x_im[c];
      si += ar[c] * x_im[c] + ai[c] * x_re[c];
    }
    y_re[r] = sr;
    y_im[r] = si;
  }
}

}  // namespace kpoqcr::simd::avx2
