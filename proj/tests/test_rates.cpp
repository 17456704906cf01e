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

#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "kpoqcr/displacement.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/junction.hpp"
#include "kpoqcr/rates.hpp"
#include "kpoqcr/spectrum.hpp"
#include "test_util.hpp"

using namespace kpoqcr;
using cd = std::complex<double>;

namespace {

// D(i sign sqrt(rho)) in a Fock space large enough that the low block is exact.
Eigen::MatrixXcd displacement_expm(double rho, int sign, int n) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const cd beta(0.0, sign * std::sqrt(rho));
  return testing::expm(beta * a.adjoint() - std::conj(beta) * a);
}

RateTable default_table(double bias, const SystemParams& base = {}, RateOptions opt = {}) {
  SystemParams p = base;
  p.bias_v = bias;
  const Spectrum s = solve_spectrum(p);
  return rate_table(p, s, eta_table(s, p.rho_c, p.dm_max), charge_distribution(p), opt);
}

// Three non-degenerate levels built by hand in a 12-photon space.
Spectrum fabricated_spectrum() {
  const int n = 12;
  Spectrum s;
  s.energies = {0.0, -1.0e9, -2.5e9};
  s.vectors = Eigen::MatrixXcd::Zero(n, 3);
  const double r = 1.0 / std::sqrt(2.0);
  s.vectors(0, 0) = r;
  s.vectors(2, 0) = r;
  s.vectors(1, 1) = 1.0;
  s.vectors(0, 2) = r;
  s.vectors(2, 2) = -r;
  s.parity = {Parity::even, Parity::odd, Parity::even};
  s.block = {0, 1, 2};
  s.omega_rf = 7e9;
  return s;
}

// Independent golden-rule pieces: Dynes DOS from the complex root and a
// composite Simpson rule on a uniform grid.
double dos_ref(double e, double gap, double g) {
  const cd z(e, g * gap);
  return std::abs((z / std::sqrt(z * z - gap * gap)).real());
}

double fermi_ref(double e, double kt) { return 1.0 / (1.0 + std::exp(e / kt)); }

double grid_integral(double off, bool backward, const SystemParams& p) {
  const double gap = p.gap_hz();
  const double kt = p.kt_n();
  const double l = gap + std::abs(off) + 60.0 * kt;
  const int n = 80000;
  const double h = 2.0 * l / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double e = -l + h * i;
    const double occ = backward ? fermi_ref(e, kt) * (1.0 - fermi_ref(e + off, kt))
                                : (1.0 - fermi_ref(e, kt)) * fermi_ref(e + off, kt);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * dos_ref(e, gap, p.gamma_dynes) * occ;
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_SUITE("rates") {
  TEST_CASE("displacement elements") {
    const double rho = 0.3;
    CHECK(std::abs(displacement_element(0, 0, rho) - std::exp(-rho / 2)) < 1e-15);
    CHECK(std::abs(displacement_element(1, 0, rho) - cd(0.0, std::sqrt(rho)) * std::exp(-rho / 2)) < 1e-15);
    CHECK(std::abs(displacement_element(1, 0, rho, -1) + cd(0.0, std::sqrt(rho)) * std::exp(-rho / 2)) < 1e-15);

    const Eigen::MatrixXcd ref = displacement_expm(rho, +1, 60);
    const Eigen::MatrixXcd ref_m = displacement_expm(rho, -1, 60);
    for (int mp = 0; mp < 12; ++mp) {
      for (int m = 0; m < 12; ++m) {
        CAPTURE(mp);
        CAPTURE(m);
        CHECK(std::abs(displacement_element(mp, m, rho) - ref(mp, m)) < 1e-12);
        CHECK(std::abs(displacement_element(mp, m, rho, -1) - ref_m(mp, m)) < 1e-12);
      }
    }

    // Columns well inside the truncation are unit vectors.
    const Eigen::MatrixXcd d = displacement_matrix(60, 5e-5);
    for (int m = 0; m <= 50; ++m) CHECK(d.col(m).norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(laguerre(0, 0.0, 1.7) == 1.0);
    CHECK(laguerre(2, 1.0, 0.5) == doctest::Approx(0.5 * 0.25 - 3.0 * 0.5 + 3.0).epsilon(1e-15));
  }

  TEST_CASE("eta at zero coupling is the identity") {
    const Spectrum s = solve_spectrum(SystemParams{});
    const EtaTable t = eta_table(s, 0.0, 4);
    const auto id = Eigen::MatrixXcd::Identity(s.size(), s.size());
    CHECK((t.f(0) - id).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((t.b(0) - id).cwiseAbs().maxCoeff() < 1e-12);
    for (int dm = 1; dm <= 4; ++dm) {
      CHECK(t.f(dm).cwiseAbs().maxCoeff() == 0.0);
      CHECK(t.f(-dm).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("eta conjugation identity") {
    const Spectrum s = solve_spectrum(SystemParams{});
    const EtaTable a = eta_table(s, 0.05, 4);
    const EtaTable b = eta_table_direct(s, 0.05, 4);
    for (int dm = -4; dm <= 4; ++dm) {
      CAPTURE(dm);
      CHECK((a.f(dm) - b.f(dm)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((a.b(dm) - b.b(dm)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("eta parity selection") {
    const Spectrum s = solve_spectrum(SystemParams{});
    const EtaTable t = eta_table(s, 0.05, 4);
    for (int dm = -4; dm <= 4; ++dm) {
      CAPTURE(dm);
      for (int mu = 0; mu < s.size(); ++mu) {
        for (int nu = 0; nu < s.size(); ++nu) {
          const bool flips = s.parity[mu] != s.parity[nu];
          const bool odd = (dm % 2) != 0;
          if (flips != odd) CHECK(std::abs(t.f(dm)(mu, nu)) < 1e-14);
        }
      }
    }
    CHECK(std::abs(t.f(1)(0, 1)) > 1e-3);
    CHECK_THROWS_AS((void)eta_table(s, 0.05, s.n_fock()), ConfigError);
    CHECK_THROWS_AS((void)eta_table(s, 0.05, -1), ConfigError);
  }

  TEST_CASE("matching sets on the cat pair") {
    const SystemParams p;
    const Spectrum s = solve_spectrum(p);
    const MatchSets m = match_sets(s, 0, 1, 0, 2, p.dm_max, p.match_tol);
    auto has = [&](int nup, int dmp) {
      return std::find(m.class1.begin(), m.class1.end(), std::make_pair(nup, dmp)) != m.class1.end();
    };
    CHECK(has(1, 2));
    for (const auto& [nup, dmp] : m.class1) CHECK(dmp == 2);
    CHECK(m.class2 == std::vector<int>{0, 1});
    CHECK(m.class3 == std::vector<int>{0, 1});

    // (nu = 1) is matched by (nu' = 0) through the same degeneracy.
    const MatchSets x = match_sets(s, 0, 1, 1, 0, p.dm_max, p.match_tol);
    CHECK(std::find(x.class1.begin(), x.class1.end(), std::make_pair(0, 0)) != x.class1.end());

    // Without the degeneracy only the trivial partner survives.
    const Spectrum f = fabricated_spectrum();
    const MatchSets y = match_sets(f, 1, 1, 2, -1, 2, 1.0);
    CHECK(y.class1 == std::vector<std::pair<int, int>>{{2, -1}});
    CHECK(y.class2 == std::vector<int>{1});
    const MatchSets z = match_sets(f, 0, 2, 1, 0, 2, 1.0);
    CHECK(z.class1.empty());
  }

  TEST_CASE("trace identity and hermiticity across the bias sweep") {
    for (double v : {0.0, 20e9, 41e9, 48e9, 60e9}) {
      const RateTable t = default_table(v);
      CAPTURE(v);
      for (int nu = 0; nu < t.size(); ++nu) CHECK(trace_identity_residual(t, nu) < 1e-6);
      CHECK(hermiticity_residual(t) < 1e-12);
      for (int mu = 0; mu < t.size(); ++mu)
        for (int nu = 0; nu < t.size(); ++nu) CHECK(t.transition(mu, nu) >= 0.0);
    }
  }

  TEST_CASE("rates scale as the inverse tunneling resistance") {
    SystemParams p;
    const RateTable a = default_table(45e9, p);
    p.r_tunnel *= 2.0;
    const RateTable b = default_table(45e9, p);
    double worst = 0.0;
    double scale = 0.0;
    for (int mu = 0; mu < a.size(); ++mu)
      for (int mup = 0; mup < a.size(); ++mup)
        for (int nu = 0; nu < a.size(); ++nu)
          for (int nup = 0; nup < a.size(); ++nup) {
            worst = std::max(worst, std::abs(b.gamma1(mu, mup, nu, nup) - 0.5 * a.gamma1(mu, mup, nu, nup)));
            scale = std::max(scale, std::abs(a.gamma1(mu, mup, nu, nup)));
          }
    CHECK(worst <= 1e-14 * scale);
    CHECK((b.k2() - 0.5 * a.k2()).cwiseAbs().maxCoeff() <= 1e-14 * a.k2().cwiseAbs().maxCoeff());
  }

  TEST_CASE("photon-number truncation converges") {
    SystemParams p;
    p.bias_v = 45e9;
    const Spectrum s = solve_spectrum(p);
    const ChargeDistribution pq = charge_distribution(p);
    const RateTable a = rate_table(p, s, eta_table(s, p.rho_c, p.dm_max), pq);
    const RateTable b = rate_table(p, s, eta_table(s, p.rho_c, p.dm_max + 4), pq);
    for (int mu = 0; mu < a.size(); ++mu) {
      for (int nu = 0; nu < a.size(); ++nu) {
        CAPTURE(mu);
        CAPTURE(nu);
        CHECK(std::abs(a.transition(mu, nu) - b.transition(mu, nu)) <= 1e-3 * b.transition(mu, nu) + 1e-300);
      }
    }
  }

  TEST_CASE("unbiased heating floor") {
    const RateTable t = default_table(0.0);
    for (int mu = 2; mu < t.size(); ++mu) {
      CAPTURE(mu);
      CHECK(t.transition(mu, 0) < 10.0);
      CHECK(t.transition(mu, 1) < 10.0);
    }
    CHECK(t.transition(1, 0) < 1e3);
    CHECK(t.transition(0, 1) < 1e3);
  }

  TEST_CASE("interference toggle zeroes only the cross-pair coherence") {
    RateOptions off;
    off.interference = false;
    const RateTable a = default_table(45e9);
    const RateTable b = default_table(45e9, {}, off);
    CHECK(a.interference());
    CHECK_FALSE(b.interference());
    CHECK(b.gamma1(0, 1, 1, 0) == cd{});
    CHECK(b.gamma1(1, 0, 0, 1) == cd{});
    CHECK(std::abs(a.gamma1(0, 1, 1, 0)) > 0.0);
    int changed = 0;
    for (int mu = 0; mu < a.size(); ++mu)
      for (int mup = 0; mup < a.size(); ++mup)
        for (int nu = 0; nu < a.size(); ++nu)
          for (int nup = 0; nup < a.size(); ++nup)
            if (a.gamma1(mu, mup, nu, nup) != b.gamma1(mu, mup, nu, nup)) ++changed;
    CHECK(changed == 2);
    CHECK((a.k2() - b.k2()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("interference suppresses the bit flip") {
    RateOptions off;
    off.interference = false;
    SystemParams p;
    const double on_rate = qcr_bitflip_rate(default_table(40e9, p));
    const double off_rate = qcr_bitflip_rate(default_table(40e9, p, off));
    CHECK(on_rate >= -1e-12 * off_rate);
    CHECK(off_rate > 0.0);
    CHECK(on_rate / off_rate <= 1e-6);

    // The suppression disappears as the cats shrink, roughly as 1 - 2 alpha^2.
    double last = 0.0;
    for (double a : {0.3, 0.1, 0.05}) {
      p.set_alpha(a);
      const double r = qcr_bitflip_rate(default_table(40e9, p)) / qcr_bitflip_rate(default_table(40e9, p, off));
      CAPTURE(a);
      CHECK(r > last);
      last = r;
    }
    CHECK(last == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("golden-rule oracle on a fabricated three-level system") {
    SystemParams p;
    p.gamma_dynes = 1e-2;
    p.rho_c = 0.2;
    p.bias_v = 45e9;
    const int dm_max = 3;
    const Spectrum s = fabricated_spectrum();
    ChargeDistribution pq;
    pq.q_max = 1;
    pq.probs = {0.2, 0.6, 0.2};
    const RateTable t = rate_table(p, s, eta_table(s, p.rho_c, dm_max), pq);

    const Eigen::MatrixXcd dp = displacement_expm(p.rho_c, +1, 60);
    const Eigen::MatrixXcd dn = displacement_expm(p.rho_c, -1, 60);
    const double c = 2.0 * constants::kVonKlitzingOhm / p.r_tunnel;
    const double w = s.omega_rf;
    const double en = p.e_island;
    for (int mu = 0; mu < 3; ++mu) {
      for (int nu = 0; nu < 3; ++nu) {
        double expected = 0.0;
        for (int dm = -dm_max; dm <= dm_max; ++dm) {
          cd ef{0.0, 0.0};
          cd eb{0.0, 0.0};
          for (int m = 0; m < s.n_fock(); ++m) {
            if (m + dm < 0 || m + dm >= s.n_fock()) continue;
            const cd proj = std::conj(s.vectors(m + dm, mu)) * s.vectors(m, nu);
            ef += dp(m + dm, m) * proj;
            eb += dn(m + dm, m) * proj;
          }
          for (int q = -1; q <= 1; ++q) {
            const double de = s.energies[mu] - s.energies[nu];
            const double off_f = de - p.bias_v + en * (1.0 + 2.0 * q) + w * dm;
            const double off_b = -de - p.bias_v - en * (1.0 - 2.0 * q) - w * dm;
            if (std::norm(ef) > 0.0) expected += pq.p(q) * std::norm(ef) * grid_integral(off_f, false, p);
            if (std::norm(eb) > 0.0) expected += pq.p(q) * std::norm(eb) * grid_integral(off_b, true, p);
          }
        }
        expected *= c;
        CAPTURE(mu);
        CAPTURE(nu);
        CHECK(t.transition(mu, nu) == doctest::Approx(expected).epsilon(1e-3));
      }
    }
  }
}
