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

#include "kpoqcr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "kpoqcr/displacement.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/fock.hpp"
#include "kpoqcr/junction.hpp"
#include "kpoqcr/spectrum.hpp"

namespace kpoqcr {

double symmetric_rel_error(double a, double b) {
  const double den = 0.5 * (std::abs(a) + std::abs(b));
  return den == 0.0 ? 0.0 : std::abs(a - b) / den;
}

OracleReport make_report(std::string name, double analytic, double numeric, double tolerance) {
  OracleReport r;
  r.name = std::move(name);
  r.analytic = analytic;
  r.numeric = numeric;
  r.rel_error = symmetric_rel_error(analytic, numeric);
  r.tolerance = tolerance;
  r.pass = r.rel_error <= tolerance;
  return r;
}

double dissipator_rate(const Eigen::MatrixXd& op, const Eigen::VectorXd& initial, const Eigen::VectorXd& final_state) {
  // <f|D[L](|i><i|)|f> = 2|<f|L|i>|^2 - 2 Re(<f|L^dag L|i><i|f>). The second term is zero for
  // orthogonal states and would otherwise only add round-off of order |L|^2 * eps.
  const double overlap = initial.dot(final_state) / (initial.norm() * final_state.norm());
  if (std::abs(overlap) > 1e-8) throw ConfigError("dissipator_rate: initial and final states are not orthogonal");
  const double m = final_state.dot(op * initial);
  return 2.0 * m * m;
}

namespace {

int fock_dim_for(double alpha) { return std::max(60, required_fock_dim(alpha, 1e-16) + 20); }

struct Xy {
  double x, y;
};

Xy xy(double alpha) {
  const double np = cat_norm_plus(alpha);
  const double nm = cat_norm_minus(alpha);
  return {(np + nm) / std::sqrt(2.0), (np - nm) / std::sqrt(2.0)};
}

}  // namespace

double dephasing_bitflip_analytic(double alpha) {
  const auto [x, y] = xy(alpha);
  const double a2 = alpha * alpha;
  const double a4 = a2 * a2;
  const double e = std::exp(-2.0 * a2);
  const double s = x * x + y * y;
  const double first = 2.0 * a4 * std::pow(s * e - 2.0 * x * y, 2);
  const double second = 2.0 * (a2 * (-s * e + 2.0 * x * y) + a4 * (s * e + 2.0 * x * y)) * (s * e + 2.0 * x * y);
  return first - second;
}

double dephasing_bitflip_asymptote(double alpha) {
  const double a2 = alpha * alpha;
  return 8.0 * a2 * a2 * std::exp(-4.0 * a2);
}

double dephasing_bitflip_numeric(double alpha) {
  const int n = fock_dim_for(alpha);
  const CatStates c = cat_states(alpha, n);
  return dissipator_rate(build_fock_operators(n).n, c.plus_alpha, c.minus_alpha);
}

double photonloss_bitflip_analytic(double alpha) {
  const auto [x, y] = xy(alpha);
  const double a2 = alpha * alpha;
  const double e = std::exp(-2.0 * a2);
  const double s = x * x + y * y;
  return std::pow(x * x - y * y, 2) * a2 * std::exp(-4.0 * a2) + a2 * (s * e - 2.0 * x * y) * (s * e + 2.0 * x * y);
}

double photonloss_bitflip_numeric(double alpha) {
  const int n = fock_dim_for(alpha);
  const CatStates c = cat_states(alpha, n);
  return 0.5 * dissipator_rate(build_fock_operators(n).a, c.plus_alpha, c.minus_alpha);
}

namespace {

Spectrum oracle_spectrum(double alpha) {
  SystemParams p;
  p.set_alpha(alpha);
  p.n_fock = fock_dim_for(alpha);
  p.n_keep = 6;
  return solve_spectrum(p);
}

Eigen::VectorXd real_column(const Spectrum& s, int i) {
  if (i < 0 || i >= s.size()) throw ConfigError("oracle: state index out of range");
  return s.vectors.col(i).real();
}

}  // namespace

double dephasing_rate_numeric(double alpha, int final_index) {
  const Spectrum s = oracle_spectrum(alpha);
  const CatStates c = cat_states(alpha, s.n_fock());
  const Eigen::VectorXd f = real_column(s, final_index);
  if (std::abs(f.dot(c.plus_alpha)) > 1e-6) throw ConfigError("dephasing_rate_numeric: final state overlaps the initial state");
  return dissipator_rate(build_fock_operators(s.n_fock()).n, c.plus_alpha, f);
}

double photonloss_rate_numeric(double alpha, int initial_index, int final_index) {
  const Spectrum s = oracle_spectrum(alpha);
  return 0.5 * dissipator_rate(build_fock_operators(s.n_fock()).a, real_column(s, initial_index),
                               real_column(s, final_index));
}

double photonloss_deexcitation_displaced_fock(double alpha) {
  const int n = fock_dim_for(alpha) + 10;
  const FockOperators ops = build_fock_operators(n);
  const CatStates c = cat_states(alpha, n);
  // D(b)|1> = (a^dag - b) D(b)|0>.
  const Eigen::VectorXd plus = coherent_state(alpha, n).real();
  const Eigen::VectorXd minus = coherent_state(-alpha, n).real();
  Eigen::VectorXd excited = (ops.adag * plus - alpha * plus) + (ops.adag * minus + alpha * minus);
  excited.normalize();
  return 0.5 * dissipator_rate(ops.a, excited, c.even);
}

std::array<double, 3> threshold_voltages(double gap_hz, double omega_rf) {
  return {gap_hz - 2.0 * omega_rf, gap_hz - omega_rf, gap_hz + omega_rf};
}

std::vector<OracleReport> validation_suite(const SystemParams& params, double tolerance_scale) {
  std::vector<OracleReport> out;
  char name[96];
  const double ts = tolerance_scale;

  for (double a : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    std::snprintf(name, sizeof name, "dephasing_bitflip alpha=%.1f", a);
    out.push_back(make_report(name, dephasing_bitflip_analytic(a), dephasing_bitflip_numeric(a), 1e-8 * ts));
    std::snprintf(name, sizeof name, "photonloss_bitflip alpha=%.1f", a);
    out.push_back(make_report(name, photonloss_bitflip_analytic(a), photonloss_bitflip_numeric(a), 1e-8 * ts));
  }
  out.push_back(make_report("dephasing_bitflip asymptote alpha=3.5", dephasing_bitflip_asymptote(3.5),
                            dephasing_bitflip_analytic(3.5), 1e-2 * ts));
  out.push_back(make_report("photonloss deexcitation phi3->phi0 alpha=2.5", 1.0, photonloss_rate_numeric(2.5, 3, 0),
                            2e-2 * ts));
  out.push_back(make_report("photonloss deexcitation displaced-Fock limit alpha=2.5", 1.0,
                            photonloss_deexcitation_displaced_fock(2.5), 2e-2 * ts));

  {
    SystemParams nj = params;
    nj.gap_delta = 0.0;
    nj.temp_n = nj.temp_s = 0.1;
    const double kt = nj.kt_n();
    double worst = 0.0;
    double worst_a = 0.0;
    double worst_n = 0.0;
    for (int k = -20; k <= 20; ++k) {
      const double off = 5e9 * k;
      const double exact = normal_junction_integral(off, kt);
      // Purely relative tolerance: the deep-tail values are far below the production floor.
      QuadratureSpec qs = make_quadrature(nj, off);
      qs.abs_tol = 0.0;
      const double num = pat_integral(off, Direction::forward, nj, qs);
      const double err = symmetric_rel_error(exact, num);
      if (exact > 1e-300 && err >= worst) {
        worst = err;
        worst_a = exact;
        worst_n = num;
      }
    }
    out.push_back(make_report("normal-junction integral, offsets -100..100 GHz", worst_a, worst_n, 1e-4 * ts));
  }

  {
    const double g = params.gamma_dynes;
    out.push_back(make_report("dynes_dos(0)", g / std::sqrt(1.0 + g * g),
                              dynes_dos(0.0, params.gap_hz(), params.gamma_dynes), 1e-12 * ts));
  }
  out.push_back(make_report("<0|D|0>", std::exp(-0.5 * params.rho_c),
                            displacement_element(0, 0, params.rho_c).real(), 1e-14 * ts));
  {
    const auto th = threshold_voltages(params.gap_hz(), params.omega_rf());
    const double gap = params.gap_delta / constants::kPlanckMicroEvPerGHz * 1e9;
    out.push_back(make_report("threshold V_a(1)", gap - params.omega_rf(), th[1], 1e-14 * ts));
  }
  {
    const double alpha = params.alpha();
    if (alpha > 0.0) {
      const Spectrum s = solve_spectrum(params);
      const CatStates c = cat_states(alpha, s.n_fock());
      const double ov = std::abs(s.vectors.col(0).real().dot(c.even));
      out.push_back(make_report("cat overlap |<phi0|cat+>|", 1.0, ov, 1e-3 * ts));
    }
  }
  return out;
}

}  // namespace kpoqcr
