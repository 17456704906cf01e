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

#include <vector>

#include "kpoqcr/params.hpp"

namespace kpoqcr {

/// Dynes-broadened BCS density of states; returns 1 for gap == 0.
[[nodiscard]] double dynes_dos(double eps, double gap, double gamma_d);

/// Fermi-Dirac factor for energy e [Hz] at temperature t [K]; step at t == 0.
[[nodiscard]] double fermi(double e, double t);
/// Same with the thermal energy k_B T/h [Hz] given directly.
[[nodiscard]] double fermi_kt(double e, double kt);

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-3;  ///< [Hz]
  double window = 0.0;    ///< half-width of the eps range [Hz]
  std::vector<double> split_points;
  int max_panels = 1 << 14;
};

/// Window and breakpoints (+-gap, 0, -offset) for a given offset.
[[nodiscard]] QuadratureSpec make_quadrature(const SystemParams& params, double offset);

enum class Direction { forward, backward };

/// Photon-assisted tunneling integral [Hz]:
///   forward   int n_s(e) [1 - f(e, T_S)] f(e + offset, T_N) de
///   backward  int n_s(e) f(e, T_S) [1 - f(e + offset, T_N)] de
[[nodiscard]] double pat_integral(double offset, Direction dir, const SystemParams& params,
                                  const QuadratureSpec& quad);
[[nodiscard]] double pat_integral(double offset, Direction dir, const SystemParams& params);

/// P(E) = int n_s(e) [1 - f(e)] f(e - E) de [Hz].
[[nodiscard]] double forward_P(double e, const SystemParams& params);

/// Closed-form normal-junction overlap int [1 - f(e)] f(e + offset) de at a
/// common temperature: -offset / (1 - exp(offset / kT)).
[[nodiscard]] double normal_junction_integral(double offset, double kt);

struct ChargeDistribution {
  int q_max = 0;
  std::vector<double> probs;  ///< index q + q_max

  [[nodiscard]] double p(int q) const;
};

/// Stationary island charge distribution from the elastic tunneling rates.
[[nodiscard]] ChargeDistribution charge_distribution(const SystemParams& params);

/// Same, with the matrix element M^2_{mm} kept in every rate (it cancels).
[[nodiscard]] ChargeDistribution charge_distribution(const SystemParams& params, int m);

}  // namespace kpoqcr
