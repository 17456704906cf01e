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

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "kpoqcr/dynamics.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/fock.hpp"
#include "kpoqcr/junction.hpp"
#include "kpoqcr/rates.hpp"
#include "kpoqcr/spectrum.hpp"
#include "test_util.hpp"

using namespace kpoqcr;
using cd = std::complex<double>;

namespace {

// Linear resonator: Fock states are the eigenstates, index m is |m>.
Spectrum linear_spectrum(int n) {
  Spectrum s;
  s.vectors = Eigen::MatrixXcd::Identity(n, n);
  for (int m = 0; m < n; ++m) {
    s.energies.push_back(-1e6 * m);
    s.parity.push_back(m % 2 ? Parity::odd : Parity::even);
    s.block.push_back(m);
  }
  s.omega_rf = 7e9;
  return s;
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

struct Setup {
  SystemParams params;
  Spectrum spectrum;
  RateTable rates;
  Generator gen;
};

Setup default_setup(double bias, bool interference = true, int n_keep = 12) {
  Setup s;
  s.params.bias_v = bias;
  s.params.n_keep = n_keep;
  s.params.kappa = 1.6e3;
  s.params.gamma_p = 0.8e3;
  s.spectrum = solve_spectrum(s.params);
  RateOptions opt;
  opt.interference = interference;
  s.rates = rate_table(s.params, s.spectrum, eta_table(s.spectrum, s.params.rho_c, s.params.dm_max),
                       charge_distribution(s.params), opt);
  s.gen = assemble_generator(&s.rates, s.spectrum, s.params, true);
  return s;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("vectorization round trip") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXcd r = random_hermitian(5, rng);
    CHECK((unvectorize(vectorize(r)) - r).cwiseAbs().maxCoeff() == 0.0);
    CHECK(vectorize(r)(1) == r(0, 1));
    CHECK_THROWS_AS((void)unvectorize(Eigen::VectorXcd::Zero(5)), ConfigError);

    // sandwich(A, B) applied to vec(rho) is vec(A rho B).
    const Eigen::MatrixXcd a = random_hermitian(5, rng);
    const Eigen::MatrixXcd b = random_hermitian(5, rng) * cd(0.3, 1.0);
    CHECK((unvectorize(sandwich(a, b) * vectorize(r)) - a * r * b).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("lindblad dissipators vanish without loss") {
    const Spectrum s = solve_spectrum(SystemParams{});
    CHECK(lindblad_dissipators(s, 0.0, 0.0).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("photon loss follows the single-mode decay law") {
    const int n = 10;
    const Spectrum s = linear_spectrum(n);
    const double kappa = 1.6e3;
    const Eigen::MatrixXcd l = lindblad_dissipators(s, kappa, 0.0);
    const std::vector<double> ts{20e-6, 100e-6, 300e-6};
    const Trajectory tr = evolve(DensityMatrix::basis(n, 3), l, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double mean = 0.0;
      for (int m = 0; m < n; ++m) mean += m * tr.states[i].population(m);
      CAPTURE(ts[i]);
      CHECK(mean == doctest::Approx(3.0 * std::exp(-constants::kTwoPi * kappa * ts[i])).epsilon(1e-6));
    }
  }

  TEST_CASE("pure dephasing leaves Fock populations alone") {
    const int n = 6;
    const Spectrum s = linear_spectrum(n);
    const double gp = 0.8e3;
    const Eigen::MatrixXcd l = lindblad_dissipators(s, 0.0, gp);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi(1) = psi(3) = 1.0 / std::sqrt(2.0);
    const double t = 100e-6;
    const Trajectory tr = evolve(DensityMatrix::pure(psi), l, {t});
    const DensityMatrix& r = tr.states.back();
    CHECK(r.population(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.population(3) == doctest::Approx(0.5).epsilon(1e-12));
    // Coherences between |1> and |3> decay as exp(-gamma_p (1 - 3)^2 t).
    CHECK(std::abs(r.rho(1, 3)) == doctest::Approx(0.5 * std::exp(-constants::kTwoPi * gp * 4.0 * t)).epsilon(1e-6));
  }

  TEST_CASE("zero generator keeps the state") {
    std::mt19937_64 rng(5);
    DensityMatrix r;
    r.rho = random_hermitian(4, rng);
    const Trajectory tr = evolve(r, Eigen::MatrixXcd::Zero(16, 16), {1e-6, 1.0});
    for (const DensityMatrix& x : tr.states) CHECK((x.rho - r.rho).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("coherent part only rotates the off-diagonals") {
    SystemParams p;
    p.kappa = p.gamma_p = 0.0;
    const Spectrum s = solve_spectrum(p);
    const Generator g = assemble_generator(nullptr, s, p, false);
    CHECK(g.qcr.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.lindblad.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS((void)assemble_generator(nullptr, s, p, true), ConfigError);

    const int n = s.size();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const DensityMatrix r0 = DensityMatrix::pure(psi);
    const double t = 0.2e-6;
    // Fine steps keep the RK4 phase error of the fastest coherence below 1e-8.
    EvolveOptions opt;
    opt.step_factor = 0.01;
    const Trajectory tr = evolve(r0, g.total(), {t}, opt);
    const DensityMatrix& r = tr.states.back();
    const std::vector<double> e = s.snapped_energies();
    for (int i = 0; i < n; ++i) CHECK(r.population(i) == doctest::Approx(r0.population(i)).epsilon(1e-12));
    CHECK(std::abs(r.rho(0, 1) - r0.rho(0, 1)) < 1e-12);
    for (int j = 2; j < n; ++j) {
      const cd expected = r0.rho(0, j) * std::exp(cd(0.0, -constants::kTwoPi * (e[0] - e[j]) * t));
      CAPTURE(j);
      CHECK(std::abs(r.rho(0, j) - expected) < 1e-8);
    }
  }

  TEST_CASE("generator annihilates the trace and keeps hermiticity") {
    const Setup s = default_setup(45e9);
    CHECK(trace_annihilation_residual(s.gen.total()) < 1e-6);
    CHECK(trace_annihilation_residual(s.gen.qcr) < 1e-12);
    CHECK(trace_annihilation_residual(s.gen.lindblad) < 1e-12);

    std::mt19937_64 rng(17);
    DensityMatrix r;
    r.rho = random_hermitian(s.spectrum.size(), rng);
    r.rho /= r.trace();
    // 1e5 RK4 steps.
    EvolveOptions opt;
    const double h = 0.1 / s.gen.total().cwiseAbs().rowwise().sum().maxCoeff();
    opt.step = h;
    const Trajectory tr = evolve(r, s.gen.total(), {1e5 * h}, opt);
    CHECK(tr.states.back().hermiticity_error() < 1e-10);
    CHECK(std::abs(tr.states.back().trace() - 1.0) < 1e-9);
  }

  TEST_CASE("evolution is linear") {
    const Setup s = default_setup(45e9);
    const int n = s.spectrum.size();
    std::mt19937_64 rng(23);
    DensityMatrix a, b, c;
    a.rho = random_hermitian(n, rng);
    b.rho = random_hermitian(n, rng);
    c.rho = 0.3 * a.rho + 0.7 * b.rho;
    const std::vector<double> ts{30e-6};
    const Eigen::MatrixXcd l = s.gen.total();
    const Eigen::MatrixXcd ra = evolve(a, l, ts).states.back().rho;
    const Eigen::MatrixXcd rb = evolve(b, l, ts).states.back().rho;
    const Eigen::MatrixXcd rc = evolve(c, l, ts).states.back().rho;
    CHECK((rc - (0.3 * ra + 0.7 * rb)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("RK4 converges at fourth order") {
    // Stiff 2 x 2 system: decay rates 1 and 10 with a fast rotation.
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d(0, 0) = -1.0;
    d(1, 1) = cd(-0.5, 5.0);
    d(2, 2) = cd(-0.5, -5.0);
    d(3, 3) = -10.0;
    std::mt19937_64 rng(29);
    const Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(random_hermitian(4, rng)).householderQ();
    const Eigen::MatrixXcd l = u * d * u.adjoint();
    DensityMatrix r;
    r.rho = random_hermitian(2, rng);
    const double t = 2.0;
    const Eigen::VectorXcd exact = testing::expm(l * t) * vectorize(r.rho);

    auto error = [&](double h) {
      EvolveOptions opt;
      opt.step_factor = 10.0;
      opt.step = h;
      opt.method = EvolveOptions::Method::stepwise;
      return (vectorize(evolve(r, l, {t}, opt).states.back().rho) - exact).cwiseAbs().maxCoeff();
    };
    const double coarse = error(0.04);
    const double fine = error(0.02);
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(coarse / fine > 13.0);
    CHECK(coarse / fine < 19.0);
  }

  TEST_CASE("powered and stepwise integration agree") {
    const Setup s = default_setup(45e9);
    const DensityMatrix r0 = DensityMatrix::basis(s.spectrum.size(), 4);
    const std::vector<double> ts{1e-6, 5e-6};
    EvolveOptions a;
    EvolveOptions b;
    b.method = EvolveOptions::Method::stepwise;
    const Trajectory ta = evolve(r0, s.gen.total(), ts, a);
    const Trajectory tb = evolve(r0, s.gen.total(), ts, b);
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK((ta.states[i].rho - tb.states[i].rho).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("time grid validation") {
    const int n = 2;
    const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n * n, n * n);
    CHECK_THROWS_AS((void)evolve(DensityMatrix::basis(n, 0), z, {2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS((void)evolve(DensityMatrix::basis(n, 0), Eigen::MatrixXcd::Zero(9, 9), {1.0}), ConfigError);
    CHECK(evolve(DensityMatrix::basis(n, 0), z, {}).states.empty());
  }

  TEST_CASE("switching on the refrigerator raises the qubit population") {
    const Setup s = default_setup(45e9);
    const Generator off = assemble_generator(nullptr, s.spectrum, s.params, false);
    const DensityMatrix r0 = DensityMatrix::basis(s.spectrum.size(), 4);
    const double t_on = 100e-6;
    const Trajectory tr = evolve(r0, off.total(), s.gen.total(), t_on, {t_on, 2.0 * t_on});
    auto qubit = [](const DensityMatrix& r) { return r.population(0) + r.population(1); };
    CHECK(tr.qcr_active[0] == 1);
    CHECK(qubit(tr.states[1]) > qubit(tr.states[0]) + 0.1);
    CHECK(tr.max_trace_drift < 1e-9);
  }

  TEST_CASE("interference protects the cat") {
    const double v = 40e9;
    const Setup on = default_setup(v);
    const Setup no_int = default_setup(v, false);
    const Generator off = assemble_generator(nullptr, on.spectrum, on.params, false);
    const DensityMatrix r0 = DensityMatrix::cat_plus_alpha(on.spectrum.size());
    CHECK(r0.p_alpha() == doctest::Approx(1.0).epsilon(1e-14));
    // Early-time decay; without interference P_alpha relaxes within a few
    // microseconds to (P0 + P1) / 2, after which leakage dominates.
    const std::vector<double> ts{2e-6};
    const double p_on = evolve(r0, on.gen.total(), ts).states.back().p_alpha();
    const double p_off = evolve(r0, off.total(), ts).states.back().p_alpha();
    const double p_no = evolve(r0, no_int.gen.total(), ts).states.back().p_alpha();
    CHECK(p_on > p_off);
    CHECK(p_no < p_off);
  }

  TEST_CASE("steady state of photon loss is the vacuum") {
    const int n = 6;
    const Spectrum s = linear_spectrum(n);
    const SteadyState ss = steady_state(lindblad_dissipators(s, 1.6e3, 0.8e3));
    CHECK(ss.method == "null-space");
    CHECK(ss.residual < 1e-10);
    CHECK(ss.rho.population(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ss.rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("no unique steady state without dissipation") {
    SystemParams p;
    p.kappa = p.gamma_p = 0.0;
    const Spectrum s = solve_spectrum(p);
    const Generator g = assemble_generator(nullptr, s, p, false);
    CHECK_THROWS_AS((void)steady_state(g.total()), DegenerateInputError);
  }

  TEST_CASE("refrigerated steady state") {
    const Setup s = default_setup(48e9);
    const SteadyState ss = steady_state(s.gen.total());
    CHECK(ss.residual < 1e-10);
    CHECK(ss.rho.hermiticity_error() < 1e-10);
    CHECK(ss.rho.min_eigenvalue() > -1e-6);
    const double p0 = ss.rho.population(0);
    const double p1 = ss.rho.population(1);
    CHECK(p0 == doctest::Approx(p1).epsilon(1e-3));
    CHECK(p0 + p1 > 0.91);

    const Setup big = default_setup(48e9, true, 16);
    const SteadyState sb = steady_state(big.gen.total());
    CHECK(std::abs(sb.rho.population(0) + sb.rho.population(1) - p0 - p1) < 0.005);
  }

  TEST_CASE("husimi function of a coherent state") {
    const cd beta(1.0, 0.5);
    const Eigen::VectorXcd c = coherent_state(beta, 40);
    const Eigen::MatrixXcd rho = c * c.adjoint();
    const HusimiGrid grid;
    const HusimiMap q = husimi_q_fock(rho, grid);
    REQUIRE(q.re.size() == 121);
    REQUIRE(q.im.size() == 121);
    for (int i = 0; i < 121; i += 10) {
      for (int j = 0; j < 121; j += 10) {
        const cd a(q.re[static_cast<std::size_t>(j)], q.im[static_cast<std::size_t>(i)]);
        CHECK(q.at(i, j) == doctest::Approx(std::exp(-std::norm(a - beta))).epsilon(1e-9));
      }
    }
    CHECK(q.normalization() == doctest::Approx(1.0).epsilon(0.01));

    HusimiGrid wide;
    wide.re_max = 25.0;
    CHECK_THROWS_AS((void)husimi_q_fock(rho, wide), ConfigError);
  }

  TEST_CASE("husimi function of the refrigerated steady state sits on the cats") {
    const Setup s = default_setup(48e9);
    const SteadyState ss = steady_state(s.gen.total());
    const HusimiMap q = husimi_q(ss.rho, s.spectrum, HusimiGrid{});
    std::size_t best = 0;
    for (std::size_t k = 1; k < q.q.size(); ++k)
      if (q.q[k] > q.q[best]) best = k;
    const double re = q.re[best % q.re.size()];
    const double im = q.im[best / q.re.size()];
    CHECK(std::abs(std::abs(re) - 2.0) < 0.3);
    CHECK(std::abs(im) < 0.3);
    for (double x : q.q) {
      CHECK(x >= -1e-12);
      CHECK(x <= 1.0 + 1e-12);
    }
  }
}
