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

#include "kpoqcr/fock.hpp"

#include <cmath>
#include <string>

#include "kpoqcr/errors.hpp"

namespace kpoqcr {

FockOperators build_fock_operators(int n_fock) {
  if (n_fock < 2) throw ConfigError("build_fock_operators: n_fock must be >= 2");
  FockOperators ops;
  ops.a = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int m = 1; m < n_fock; ++m) ops.a(m - 1, m) = std::sqrt(static_cast<double>(m));
  ops.adag = ops.a.transpose();
  ops.n = Eigen::MatrixXd::Zero(n_fock, n_fock);
  ops.parity = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) {
    ops.n(m, m) = m;
    ops.parity(m, m) = (m % 2 == 0) ? 1.0 : -1.0;
  }
  return ops;
}

Eigen::VectorXcd coherent_amplitudes(std::complex<double> alpha, int n_fock) {
  Eigen::VectorXcd c(n_fock);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int m = 1; m < n_fock; ++m) c(m) = c(m - 1) * alpha / std::sqrt(static_cast<double>(m));
  return c;
}

int required_fock_dim(double abs_alpha, double tail) {
  const double mean = abs_alpha * abs_alpha;
  // Poisson weight w_m; once m + 2 > mean the remaining mass beyond m is
  // bounded by the geometric series w_{m+1} / (1 - mean / (m + 2)).
  double w = std::exp(-mean);
  for (int m = 0; m < 100000; ++m) {
    if (m + 2 > mean) {
      const double next = w * mean / (m + 1);
      if (next / (1.0 - mean / (m + 2)) < tail) return m + 1;
    }
    w *= mean / (m + 1);
  }
  return 100000;
}

Eigen::VectorXcd coherent_state(std::complex<double> alpha, int n_fock) {
  Eigen::VectorXcd c = coherent_amplitudes(alpha, n_fock);
  const double norm2 = c.squaredNorm();
  if (1.0 - norm2 > 1e-10) {
    throw NumericalError("coherent_state: |alpha'|=" + std::to_string(std::abs(alpha)) +
                         " needs n_fock >= " +
                         std::to_string(required_fock_dim(std::abs(alpha))) + " (have " +
                         std::to_string(n_fock) + ")");
  }
  return c / std::sqrt(norm2);
}

double cat_norm_plus(double alpha) {
  return 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * alpha * alpha));
}

double cat_norm_minus(double alpha) {
  // 2 - 2e^{-2a^2} = 4 sinh(a^2) e^{-a^2}; avoids cancellation for small alpha.
  const double a2 = alpha * alpha;
  const double denom = 4.0 * std::sinh(a2) * std::exp(-a2);
  if (!(denom > 0.0)) throw DegenerateInputError("cat_states: N_- diverges at alpha = 0");
  return 1.0 / std::sqrt(denom);
}

CatStates cat_states(double alpha, int n_fock) {
  if (alpha < 0.0) throw ConfigError("cat_states: alpha must be >= 0");
  if (alpha == 0.0) throw DegenerateInputError("cat_states: odd cat undefined at alpha = 0");
  const Eigen::VectorXd plus = coherent_state(alpha, n_fock).real();
  Eigen::VectorXd minus = plus;
  for (int m = 1; m < n_fock; m += 2) minus(m) = -minus(m);

  CatStates cats;
  cats.n_plus = cat_norm_plus(alpha);
  cats.n_minus = cat_norm_minus(alpha);
  cats.even = cats.n_plus * (plus + minus);
  cats.odd = cats.n_minus * (plus - minus);
  // The truncated coherent state was renormalized, so renormalize the cats too.
  cats.even.normalize();
  cats.odd.normalize();
  cats.plus_alpha = (cats.even + cats.odd) / std::sqrt(2.0);
  cats.minus_alpha = (cats.even - cats.odd) / std::sqrt(2.0);
  return cats;
}

}  // namespace kpoqcr
