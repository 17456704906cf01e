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

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kpoqcr/params.hpp"

namespace kpoqcr {

struct OracleReport {
  std::string name;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// |a - b| / ((|a| + |b|) / 2); zero when both vanish.
[[nodiscard]] double symmetric_rel_error(double a, double b);
[[nodiscard]] OracleReport make_report(std::string name, double analytic, double numeric, double tolerance);

/// <f| D[O] |i><i| |f> evaluated directly in the Fock basis.
[[nodiscard]] double dissipator_rate(const Eigen::MatrixXd& op, const Eigen::VectorXd& initial,
                                     const Eigen::VectorXd& final_state);

/// Pure-dephasing rate / gamma_p from |phi_+a> to |phi_-a>, closed form.
[[nodiscard]] double dephasing_bitflip_analytic(double alpha);
/// Same as a direct quadratic form.
[[nodiscard]] double dephasing_bitflip_numeric(double alpha);
/// Large-alpha limit 8 a^4 e^{-4a^2} of dephasing_bitflip_analytic.
[[nodiscard]] double dephasing_bitflip_asymptote(double alpha);
/// Pure-dephasing rate / gamma_p from |phi_+a> to KPO eigenstate final_index
/// (chi/2pi = 10 MHz, beta set from alpha).
[[nodiscard]] double dephasing_rate_numeric(double alpha, int final_index);

/// Photon-loss bit-flip rate / kappa, closed form.
[[nodiscard]] double photonloss_bitflip_analytic(double alpha);
/// Same from (1/2) <f|D[a] rho_i|f>, the rate carried by (kappa/2) D[a].
[[nodiscard]] double photonloss_bitflip_numeric(double alpha);
/// Photon-loss rate / kappa between KPO eigenstates.
[[nodiscard]] double photonloss_rate_numeric(double alpha, int initial_index, int final_index);
/// Photon-loss rate / kappa from (D(a)|1> + D(-a)|1>)/sqrt(2) to the even cat. The displaced-Fock
/// states approximate phi3 only for large alpha; the exact eigenstates converge as 1 - O(1/alpha^2).
[[nodiscard]] double photonloss_deexcitation_displaced_fock(double alpha);

/// (Delta/h - 2 w_RF, Delta/h - w_RF, Delta/h + w_RF) [Hz].
[[nodiscard]] std::array<double, 3> threshold_voltages(double gap_hz, double omega_rf);

/// Full oracle suite; tolerance_scale multiplies every tolerance.
[[nodiscard]] std::vector<OracleReport> validation_suite(const SystemParams& params, double tolerance_scale = 1.0);

}  // namespace kpoqcr
