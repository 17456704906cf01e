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

/// Generalized Laguerre polynomial L_n^alpha(x) by three-term recurrence.
[[nodiscard]] double laguerre(int n, double alpha, double x);

/// <m'|D(sign * i sqrt(rho_c))|m>; sign is +1 or -1.
[[nodiscard]] std::complex<double> displacement_element(int m_prime, int m, double rho_c, int sign = +1);

/// Full n_fock x n_fock matrix of displacement_element.
[[nodiscard]] Eigen::MatrixXcd displacement_matrix(int n_fock, double rho_c, int sign = +1);

/// Diagonal squared element e^{-rho}[L_m^0(rho)]^2.
[[nodiscard]] double displacement_diag_sq(int m, double rho_c);

}  // namespace kpoqcr
