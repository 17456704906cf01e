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

namespace kpoqcr {

// All energies are stored as frequencies E/h in Hz; rates are in s^-1.
namespace constants {
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
/// h in micro-eV per GHz.
inline constexpr double kPlanckMicroEvPerGHz = 4.135667696;
/// k_B / h in Hz per kelvin (CODATA 2018, exact).
inline constexpr double kBoltzmannHzPerKelvin = 2.083661912e10;
/// R_K = h / e^2 in ohm.
inline constexpr double kVonKlitzingOhm = 25812.80745;
}  // namespace constants

/// Physical and numerical parameters of the KPO + SINIS junction system.
/// Frequencies are ordinary (not angular) frequencies in Hz.
struct SystemParams {
  double chi = 10e6;          ///< Kerr nonlinearity chi/2pi [Hz]
  double beta = 20e6;         ///< pump amplitude beta/2pi [Hz]
  double delta_kpo = 0.0;     ///< detuning Delta_KPO/2pi [Hz]
  double omega_c = 7e9;       ///< dressed resonator frequency omega_c/2pi [Hz]
  double gap_delta = 200.0;   ///< superconducting gap [micro-eV]
  double gamma_dynes = 1e-4;  ///< Dynes parameter
  double rho_c = 5e-5;        ///< island-oscillator interaction parameter
  double r_tunnel = 50e3;     ///< tunneling resistance [ohm]
  double e_island = 2e9;      ///< island charging energy E_N/h [Hz]
  double temp_n = 0.1;        ///< normal-metal electron temperature [K]
  double temp_s = 0.1;        ///< superconductor electron temperature [K]
  double kappa = 1.6e3;       ///< single-photon loss kappa/2pi [Hz]
  double gamma_p = 0.8e3;     ///< pure dephasing gamma_p/2pi [Hz]
  double bias_v = 0.0;        ///< single-junction bias eV/h [Hz]
  int n_fock = 60;
  int n_keep = 12;
  int dm_max = 4;
  int q_max = 16;
  double match_tol = 1e6;      ///< energy-matching tolerance [Hz]
  double quad_rel_tol = 1e-8;

  /// Coherent-state amplitude sqrt(2 beta / chi).
  [[nodiscard]] double alpha() const;
  /// Rotating-frame frequency omega_p/2 = omega_c - Delta_KPO [Hz].
  [[nodiscard]] double omega_rf() const;
  /// Gap Delta/h [Hz].
  [[nodiscard]] double gap_hz() const;
  /// k_B T / h [Hz].
  [[nodiscard]] double kt_n() const;
  [[nodiscard]] double kt_s() const;

  /// Sets beta so that alpha() == alpha.
  void set_alpha(double alpha);

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Delta in micro-eV -> Delta/h in Hz.
[[nodiscard]] double micro_ev_to_hz(double micro_ev);

}  // namespace kpoqcr
