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

#include "kpoqcr/params.hpp"

#include <cmath>
#include <string>

#include "kpoqcr/errors.hpp"

namespace kpoqcr {

double micro_ev_to_hz(double micro_ev) {
  return micro_ev / constants::kPlanckMicroEvPerGHz * 1e9;
}

double SystemParams::alpha() const { return std::sqrt(2.0 * beta / chi); }

double SystemParams::omega_rf() const { return omega_c - delta_kpo; }

double SystemParams::gap_hz() const { return micro_ev_to_hz(gap_delta); }

double SystemParams::kt_n() const { return constants::kBoltzmannHzPerKelvin * temp_n; }

double SystemParams::kt_s() const { return constants::kBoltzmannHzPerKelvin * temp_s; }

void SystemParams::set_alpha(double alpha) { beta = 0.5 * chi * alpha * alpha; }

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid parameters: " + what);
}
bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}
}  // namespace

void SystemParams::validate() const {
  require(finite_all({chi, beta, delta_kpo, omega_c, gap_delta, gamma_dynes, rho_c,
                      r_tunnel, e_island, temp_n, temp_s, kappa, gamma_p, bias_v,
                      match_tol, quad_rel_tol}),
          "all parameters must be finite");
  require(chi > 0.0, "chi must be > 0");
  require(beta >= 0.0, "beta must be >= 0 (alpha real)");
  require(omega_c > 0.0, "omega_c must be > 0");
  require(gap_delta >= 0.0, "gap_delta must be >= 0");
  require(gamma_dynes > 0.0, "gamma_dynes must be > 0");
  require(rho_c >= 0.0, "rho_c must be >= 0");
  require(r_tunnel > 0.0, "r_tunnel must be > 0");
  require(e_island >= 0.0, "e_island must be >= 0");
  require(temp_n >= 0.0 && temp_s >= 0.0, "temperatures must be >= 0");
  require(kappa >= 0.0 && gamma_p >= 0.0, "kappa and gamma_p must be >= 0");
  require(n_fock >= 2, "n_fock must be >= 2");
  require(n_keep >= 2 && n_keep <= n_fock, "need n_fock >= n_keep >= 2");
  require(dm_max >= 0 && dm_max < n_fock, "need 0 <= dm_max < n_fock");
  require(q_max >= 1, "q_max must be >= 1");
  require(match_tol > 0.0, "match_tol must be > 0");
  require(quad_rel_tol > 0.0 && quad_rel_tol < 1.0, "quad_rel_tol must be in (0, 1)");
}

}  // namespace kpoqcr
