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

#include <complex>

#include <Eigen/Dense>

namespace kpoqcr {

/// Truncated Fock-space operators; all real in the number basis.
struct FockOperators {
  Eigen::MatrixXd a;
  Eigen::MatrixXd adag;
  Eigen::MatrixXd n;
  Eigen::MatrixXd parity;

  [[nodiscard]] int dim() const { return static_cast<int>(a.rows()); }
};

[[nodiscard]] FockOperators build_fock_operators(int n_fock);

/// |alpha'> truncated to n_fock levels and renormalized. Throws NumericalError
/// naming the required dimension when the truncated tail carries more than
/// 1e-10 of the norm.
[[nodiscard]] Eigen::VectorXcd coherent_state(std::complex<double> alpha, int n_fock);

/// Exact Fock amplitudes e^{-|a|^2/2} a^m / sqrt(m!) for m < n_fock, no
/// renormalization.
[[nodiscard]] Eigen::VectorXcd coherent_amplitudes(std::complex<double> alpha, int n_fock);

/// Smallest dimension whose truncation loses less than `tail` of |alpha|'s norm.
[[nodiscard]] int required_fock_dim(double abs_alpha, double tail = 1e-10);

struct CatStates {
  Eigen::VectorXd even;        ///< |phi_0> = N+(|a> + |-a>)
  Eigen::VectorXd odd;         ///< |phi_1> = N-(|a> - |-a>)
  Eigen::VectorXd plus_alpha;  ///< (|phi_0> + |phi_1>)/sqrt2
  Eigen::VectorXd minus_alpha; ///< (|phi_0> - |phi_1>)/sqrt2
  double n_plus = 0.0;
  double n_minus = 0.0;
};

/// N_pm = (2 pm 2 e^{-2 alpha^2})^{-1/2}. Throws DegenerateInputError for
/// N_- at alpha = 0.
[[nodiscard]] double cat_norm_plus(double alpha);
[[nodiscard]] double cat_norm_minus(double alpha);

/// Even/odd cat states of real amplitude alpha > 0. At alpha = 0 the odd state
/// is undefined and DegenerateInputError is thrown; use Fock |1> instead.
[[nodiscard]] CatStates cat_states(double alpha, int n_fock);

}  // namespace kpoqcr
