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
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kpoqcr/junction.hpp"
#include "kpoqcr/params.hpp"
#include "kpoqcr/spectrum.hpp"

namespace kpoqcr {

/// Photon-transfer overlaps eta^{(f|b, dm)}_{mu,nu} for |dm| <= dm_max.
struct EtaTable {
  int dm_max = 0;
  std::vector<Eigen::MatrixXcd> fwd;  ///< index dm + dm_max
  std::vector<Eigen::MatrixXcd> bwd;

  [[nodiscard]] const Eigen::MatrixXcd& f(int dm) const { return fwd[static_cast<std::size_t>(dm + dm_max)]; }
  [[nodiscard]] const Eigen::MatrixXcd& b(int dm) const { return bwd[static_cast<std::size_t>(dm + dm_max)]; }
};

/// Backward coefficients come from the conjugation identity
/// eta^{(b,dm)}_{mu,nu} = conj(eta^{(f,-dm)}_{nu,mu}).
[[nodiscard]] EtaTable eta_table(const Spectrum& spectrum, double rho_c, int dm_max);
/// Backward coefficients from D(-i sqrt(rho_c)) directly.
[[nodiscard]] EtaTable eta_table_direct(const Spectrum& spectrum, double rho_c, int dm_max);

struct MatchSets {
  std::vector<std::pair<int, int>> class1;  ///< (nu', dm') partners of (nu, dm)
  std::vector<int> class2;                  ///< xi for the first-index condition
  std::vector<int> class3;                  ///< xi for the second-index condition
};

/// Admissible partners for rho_{mu mu'} fed from (nu, dm). Energies are the
/// snapped spectrum energies.
[[nodiscard]] MatchSets match_sets(const Spectrum& spectrum, int mu, int mu_prime, int nu, int dm, int dm_max,
                                   double match_tol);

/// Write-once table of QCR rate coefficients [1/s] at one bias voltage.
class RateTable {
 public:
  RateTable() = default;
  RateTable(int n, double bias_v, bool interference);

  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] double bias_v() const { return bias_v_; }
  [[nodiscard]] bool interference() const { return interference_; }

  [[nodiscard]] std::complex<double> gamma1(int mu, int mu_p, int nu, int nu_p) const {
    return g1_[index4(mu, mu_p, nu, nu_p)];
  }
  [[nodiscard]] std::complex<double> gamma2(int mu, int mu_p, int xi) const;
  [[nodiscard]] std::complex<double> gamma3(int mu, int mu_p, int xi) const;

  /// Transition rate |nu> -> |mu>, i.e. Re Gamma1(mu, mu, nu, nu).
  [[nodiscard]] double transition(int mu, int nu) const { return gamma1(mu, mu, nu, nu).real(); }

  /// K(mu, xi) with Gamma2(mu, mu', xi) = K(mu, xi) and
  /// Gamma3(mu, mu', xi) = conj(K(mu', xi)) wherever xi is admissible.
  [[nodiscard]] const Eigen::MatrixXcd& k2() const { return k2_; }
  [[nodiscard]] const std::vector<char>& matched2() const { return matched2_; }

  // Assembly access.
  std::complex<double>& g1_ref(int mu, int mu_p, int nu, int nu_p) { return g1_[index4(mu, mu_p, nu, nu_p)]; }
  Eigen::MatrixXcd& k2_ref() { return k2_; }
  std::vector<char>& matched2_ref() { return matched2_; }

 private:
  [[nodiscard]] std::size_t index4(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }

  int n_ = 0;
  double bias_v_ = 0.0;
  bool interference_ = true;
  std::vector<std::complex<double>> g1_;
  Eigen::MatrixXcd k2_;
  std::vector<char> matched2_;  ///< n x n, xi admissible for mu
};

struct RateOptions {
  bool interference = true;
  int threads = 0;
  double pq_floor = 1e-13;  ///< charge states below this weight are skipped
};

[[nodiscard]] RateTable rate_table(const SystemParams& params, const Spectrum& spectrum, const EtaTable& eta,
                                   const ChargeDistribution& pq, const RateOptions& options = {});

/// QCR-induced bit-flip rate <phi_-a| L_QCR[|phi_a><phi_a|] |phi_-a> [1/s].
[[nodiscard]] double qcr_bitflip_rate(const RateTable& rates);

/// Sum over mu of Gamma1(mu, mu, nu, nu) + Gamma2(nu, nu, nu) + Gamma3(nu, nu, nu)
/// relative to the largest term; zero for a consistent table.
[[nodiscard]] double trace_identity_residual(const RateTable& rates, int nu);

/// Largest |Gamma1(mu', mu, nu', nu) - conj Gamma1(mu, mu', nu, nu')|, relative to max |Gamma1|.
[[nodiscard]] double hermiticity_residual(const RateTable& rates);

}  // namespace kpoqcr
