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

#include "kpoqcr/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "kpoqcr/displacement.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/parallel.hpp"

namespace kpoqcr {

namespace {

Eigen::MatrixXcd band(const Eigen::MatrixXcd& d, int dm) {
  const int n = static_cast<int>(d.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const int mp = m + dm;
    if (mp >= 0 && mp < n) out(mp, m) = d(mp, m);
  }
  return out;
}

void check_dm(const Spectrum& spectrum, int dm_max) {
  if (dm_max < 0) throw ConfigError("eta_table: dm_max must be >= 0");
  if (dm_max >= spectrum.n_fock()) throw ConfigError("eta_table: dm_max must be below n_fock");
}

}  // namespace

EtaTable eta_table(const Spectrum& spectrum, double rho_c, int dm_max) {
  check_dm(spectrum, dm_max);
  const Eigen::MatrixXcd d = displacement_matrix(spectrum.n_fock(), rho_c, +1);
  const Eigen::MatrixXcd& v = spectrum.vectors;
  EtaTable t;
  t.dm_max = dm_max;
  for (int dm = -dm_max; dm <= dm_max; ++dm) t.fwd.push_back(v.adjoint() * band(d, dm) * v);
  for (int dm = -dm_max; dm <= dm_max; ++dm) t.bwd.push_back(t.f(-dm).adjoint());
  return t;
}

EtaTable eta_table_direct(const Spectrum& spectrum, double rho_c, int dm_max) {
  check_dm(spectrum, dm_max);
  const Eigen::MatrixXcd df = displacement_matrix(spectrum.n_fock(), rho_c, +1);
  const Eigen::MatrixXcd db = displacement_matrix(spectrum.n_fock(), rho_c, -1);
  const Eigen::MatrixXcd& v = spectrum.vectors;
  EtaTable t;
  t.dm_max = dm_max;
  for (int dm = -dm_max; dm <= dm_max; ++dm) {
    t.fwd.push_back(v.adjoint() * band(df, dm) * v);
    t.bwd.push_back(v.adjoint() * band(db, dm) * v);
  }
  return t;
}

MatchSets match_sets(const Spectrum& spectrum, int mu, int mu_prime, int nu, int dm, int dm_max,
                     double match_tol) {
  const std::vector<double> e = spectrum.snapped_energies();
  const double w = spectrum.omega_rf;
  const int n = spectrum.size();
  MatchSets out;
  auto reject_cross = [&](int dmp) {
    if (dmp != dm) throw NumericalError("match_sets: energy match with dm' != dm; level spread exceeds omega_rf");
  };
  for (int dmp = -dm_max; dmp <= dm_max; ++dmp) {
    for (int k = 0; k < n; ++k) {
      if (std::abs((e[mu] - e[nu] + w * dm) - (e[mu_prime] - e[k] + w * dmp)) < match_tol) {
        reject_cross(dmp);
        out.class1.emplace_back(k, dmp);
      }
      if (std::abs((-e[mu] + w * dm) - (-e[k] + w * dmp)) < match_tol) {
        reject_cross(dmp);
        out.class2.push_back(k);
      }
      if (std::abs((-e[mu_prime] + w * dm) - (-e[k] + w * dmp)) < match_tol) {
        reject_cross(dmp);
        out.class3.push_back(k);
      }
    }
  }
  return out;
}

RateTable::RateTable(int n, double bias_v, bool interference)
    : n_(n),
      bias_v_(bias_v),
      interference_(interference),
      g1_(static_cast<std::size_t>(n) * n * n * n, {0.0, 0.0}),
      k2_(Eigen::MatrixXcd::Zero(n, n)),
      matched2_(static_cast<std::size_t>(n) * n, 0) {}

std::complex<double> RateTable::gamma2(int mu, int /*mu_p*/, int xi) const {
  return matched2_[static_cast<std::size_t>(mu) * n_ + xi] ? k2_(mu, xi) : std::complex<double>{};
}

std::complex<double> RateTable::gamma3(int /*mu*/, int mu_p, int xi) const {
  return matched2_[static_cast<std::size_t>(mu_p) * n_ + xi] ? std::conj(k2_(mu_p, xi)) : std::complex<double>{};
}

namespace {

struct Term {
  double key;  ///< forward-integral offset
  int mu, nu, dm, q;
  bool backward;
};

}  // namespace

RateTable rate_table(const SystemParams& params, const Spectrum& spectrum, const EtaTable& eta,
                     const ChargeDistribution& pq, const RateOptions& options) {
  const int n = spectrum.size();
  const int dm_max = eta.dm_max;
  if (static_cast<int>(eta.f(0).rows()) != n) throw ConfigError("rate_table: eta/spectrum size mismatch");

  const std::vector<double> e = spectrum.snapped_energies();
  const double w = spectrum.omega_rf;
  const double tol = params.match_tol;
  const double v = params.bias_v;
  const double en = params.e_island;

  // Class-1 matches with dm' != dm would need a level spread comparable to
  // omega_rf; rule them out once for the whole table.
  const auto [lo_it, hi_it] = std::minmax_element(e.begin(), e.end());
  if (dm_max > 0 && 2.0 * (*hi_it - *lo_it) + tol >= w) {
    throw NumericalError("rate_table: level spread allows matches with dm' != dm");
  }

  std::vector<int> qs;
  for (int q = -pq.q_max; q <= pq.q_max; ++q) {
    if (pq.p(q) >= options.pq_floor) qs.push_back(q);
  }

  // Every integral the table needs, keyed by its forward-equivalent offset.
  std::vector<Term> terms;
  for (int dm = -dm_max; dm <= dm_max; ++dm) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        const bool use_f = eta.f(dm)(mu, nu) != std::complex<double>{};
        const bool use_b = eta.b(dm)(mu, nu) != std::complex<double>{};
        for (int q : qs) {
          if (use_f) terms.push_back({(e[mu] - e[nu]) - v + en * (1.0 + 2.0 * q) + w * dm, mu, nu, dm, q, false});
          if (use_b) {
            const double off_b = (e[nu] - e[mu]) - v - en * (1.0 - 2.0 * q) - w * dm;
            terms.push_back({-off_b, mu, nu, dm, q, true});
          }
        }
      }
    }
  }
  std::vector<double> keys(terms.size());
  std::transform(terms.begin(), terms.end(), keys.begin(), [](const Term& t) { return t.key; });
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<double> values(keys.size(), 0.0);
  parallel_for(
      keys.size(),
      [&](std::size_t i) {
        try {
          values[i] = pat_integral(keys[i], Direction::forward, params, make_quadrature(params, keys[i]));
        } catch (const NumericalError& err) {
          const auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& t) { return t.key == keys[i]; });
          char buf[200];
          std::snprintf(buf, sizeof buf, " [mu=%d nu=%d dm=%d q=%d %s]", it->mu, it->nu, it->dm, it->q,
                        it->backward ? "backward" : "forward");
          throw NumericalError(std::string(err.what()) + buf);
        }
      },
      options.threads);
  auto lookup = [&](double key) {
    return values[static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin())];
  };

  // q-summed integrals A(dm)(mu, nu), mu final and nu initial.
  std::vector<Eigen::MatrixXd> af(2 * dm_max + 1, Eigen::MatrixXd::Zero(n, n));
  std::vector<Eigen::MatrixXd> ab(2 * dm_max + 1, Eigen::MatrixXd::Zero(n, n));
  for (const Term& t : terms) {
    auto& target = t.backward ? ab[t.dm + dm_max] : af[t.dm + dm_max];
    target(t.mu, t.nu) += pq.p(t.q) * lookup(t.key);
  }

  const double c = constants::kVonKlitzingOhm / params.r_tunnel;
  RateTable table(n, v, options.interference);

  for (int mu = 0; mu < n; ++mu) {
    for (int mup = 0; mup < n; ++mup) {
      for (int nu = 0; nu < n; ++nu) {
        for (int nup = 0; nup < n; ++nup) {
          if (std::abs((e[mu] - e[nu]) - (e[mup] - e[nup])) >= tol) continue;
          const bool same = (mu == mup && nu == nup);
          std::complex<double> sum{0.0, 0.0};
          for (int dm = -dm_max; dm <= dm_max; ++dm) {
            const int k = dm + dm_max;
            const double a_f = same ? af[k](mu, nu) : 0.5 * (af[k](mu, nu) + af[k](mup, nup));
            const double a_b = same ? ab[k](mu, nu) : 0.5 * (ab[k](mu, nu) + ab[k](mup, nup));
            sum += a_f * eta.f(dm)(mu, nu) * std::conj(eta.f(dm)(mup, nup));
            sum += a_b * eta.b(dm)(mu, nu) * std::conj(eta.b(dm)(mup, nup));
          }
          table.g1_ref(mu, mup, nu, nup) = 2.0 * c * sum;
        }
      }
    }
  }
  if (!options.interference && n >= 2) {
    table.g1_ref(0, 1, 1, 0) = 0.0;
    table.g1_ref(1, 0, 0, 1) = 0.0;
  }

  Eigen::MatrixXcd& k2 = table.k2_ref();
  std::vector<char>& matched = table.matched2_ref();
  for (int mu = 0; mu < n; ++mu) {
    for (int xi = 0; xi < n; ++xi) {
      if (std::abs(e[mu] - e[xi]) >= tol) continue;
      matched[static_cast<std::size_t>(mu) * n + xi] = 1;
      std::complex<double> sum{0.0, 0.0};
      for (int dm = -dm_max; dm <= dm_max; ++dm) {
        const int k = dm + dm_max;
        for (int nu = 0; nu < n; ++nu) {
          sum += af[k](nu, mu) * std::conj(eta.f(dm)(nu, mu)) * eta.f(dm)(nu, xi);
          sum += ab[k](nu, mu) * std::conj(eta.b(dm)(nu, mu)) * eta.b(dm)(nu, xi);
        }
      }
      k2(mu, xi) = -c * sum;
    }
  }
  return table;
}

double qcr_bitflip_rate(const RateTable& rates) {
  if (rates.size() < 2) throw ConfigError("qcr_bitflip_rate: need the cat pair");
  // rho_alpha = 1/2 on the {0,1} block; project on (|0> - |1>)/sqrt2.
  const double u[2] = {1.0, -1.0};
  std::complex<double> out{0.0, 0.0};
  for (int mu = 0; mu < 2; ++mu) {
    for (int mup = 0; mup < 2; ++mup) {
      std::complex<double> l{0.0, 0.0};
      for (int nu = 0; nu < 2; ++nu) {
        for (int nup = 0; nup < 2; ++nup) l += 0.5 * rates.gamma1(mu, mup, nu, nup);
      }
      for (int xi = 0; xi < 2; ++xi) {
        l += 0.5 * rates.gamma2(mu, mup, xi);
        l += 0.5 * rates.gamma3(mu, mup, xi);
      }
      out += 0.5 * u[mu] * u[mup] * l;
    }
  }
  return out.real();
}

double trace_identity_residual(const RateTable& rates, int nu) {
  std::complex<double> sum = rates.gamma2(nu, nu, nu) + rates.gamma3(nu, nu, nu);
  double scale = std::abs(rates.gamma2(nu, nu, nu)) + std::abs(rates.gamma3(nu, nu, nu));
  for (int mu = 0; mu < rates.size(); ++mu) {
    sum += rates.gamma1(mu, mu, nu, nu);
    scale += std::abs(rates.gamma1(mu, mu, nu, nu));
  }
  return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

double hermiticity_residual(const RateTable& rates) {
  const int n = rates.size();
  double worst = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int mup = 0; mup < n; ++mup)
      for (int nu = 0; nu < n; ++nu)
        for (int nup = 0; nup < n; ++nup)
          worst = std::max(worst, std::abs(rates.gamma1(mup, mu, nup, nu) - std::conj(rates.gamma1(mu, mup, nu, nup))));
  double scale = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int mup = 0; mup < n; ++mup)
      for (int nu = 0; nu < n; ++nu)
        for (int nup = 0; nup < n; ++nup) scale = std::max(scale, std::abs(rates.gamma1(mu, mup, nu, nup)));
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace kpoqcr
