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

#include "kpoqcr/displacement.hpp"

#include <cmath>
#include <cstdlib>

#include "kpoqcr/errors.hpp"

namespace kpoqcr {

double laguerre(int n, double alpha, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

std::complex<double> i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

std::complex<double> displacement_element(int m_prime, int m, double rho_c, int sign) {
  if (m_prime < 0 || m < 0) throw ConfigError("displacement_element: negative Fock index");
  if (rho_c < 0.0) throw ConfigError("displacement_element: rho_c must be >= 0");
  if (sign != 1 && sign != -1) throw ConfigError("displacement_element: sign must be +1 or -1");
  const int l = std::abs(m - m_prime);
  const int lo = std::min(m, m_prime);
  const int hi = std::max(m, m_prime);
  double mag;
  if (l == 0) {
    mag = 1.0;
  } else if (rho_c == 0.0) {
    return {0.0, 0.0};
  } else {
    mag = std::exp(0.5 * l * std::log(rho_c) + 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)));
  }
  const double value = std::exp(-0.5 * rho_c) * mag * laguerre(lo, l, rho_c);
  // Both branches reduce to i^{|l|}; the negative-displacement matrix is the
  // complex conjugate.
  std::complex<double> phase = i_pow(l);
  if (sign < 0) phase = std::conj(phase);
  return value * phase;
}

Eigen::MatrixXcd displacement_matrix(int n_fock, double rho_c, int sign) {
  Eigen::MatrixXcd d(n_fock, n_fock);
  for (int mp = 0; mp < n_fock; ++mp) {
    for (int m = 0; m < n_fock; ++m) d(mp, m) = displacement_element(mp, m, rho_c, sign);
  }
  return d;
}

double displacement_diag_sq(int m, double rho_c) {
  const double l = laguerre(m, 0.0, rho_c);
  return std::exp(-rho_c) * l * l;
}

}  // namespace kpoqcr
