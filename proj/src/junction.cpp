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

#include "kpoqcr/junction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "kpoqcr/displacement.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/quadrature.hpp"
#include "kpoqcr/simd/kernels.hpp"

namespace kpoqcr {

namespace {

// Fermi tails beyond this many k_B T past the plateau are below 1e-15 of it and are dropped.
constexpr double kTailKt = 36.0;

}  // namespace

double dynes_dos(double eps, double gap, double gamma_d) {
  if (gap == 0.0) return 1.0;
  const double gi = gamma_d * gap;
  // (eps + i g)^2 - gap^2 with the real part factored against cancellation.
  const std::complex<double> w((eps - gap) * (eps + gap) - gi * gi, 2.0 * eps * gi);
  return std::abs((std::complex<double>(eps, gi) / std::sqrt(w)).real());
}

double fermi_kt(double e, double kt) {
  if (kt == 0.0) return e < 0.0 ? 1.0 : (e > 0.0 ? 0.0 : 0.5);
  const double x = e / kt;
  if (x > 0.0) {
    const double ex = std::exp(-x);
    return ex / (1.0 + ex);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double fermi(double e, double t) {
  if (t < 0.0) throw ConfigError("fermi: temperature must be >= 0");
  return fermi_kt(e, t * constants::kBoltzmannHzPerKelvin);
}

QuadratureSpec make_quadrature(const SystemParams& params, double offset) {
  QuadratureSpec q;
  q.rel_tol = params.quad_rel_tol;
  const double kt = std::max(params.kt_n(), params.kt_s());
  const double gap = params.gap_hz();
  q.window = gap + std::abs(offset) + 40.0 * kt + 1e9;
  q.split_points = {-gap, 0.0, gap, -offset};
  return q;
}

double pat_integral(double offset, Direction dir, const SystemParams& params, const QuadratureSpec& quad) {
  // Mirroring eps -> -eps maps the backward integral onto the forward one.
  const double off = dir == Direction::forward ? offset : -offset;
  simd::PatArgs args;
  args.offset = off;
  args.gap = params.gap_hz();
  args.gamma = params.gamma_dynes;
  args.kt_s = params.kt_s();
  args.kt_n = params.kt_n();

  // The Fermi product is flat between 0 and -off (height exp(-off/kT) when off > 0) and decays
  // outside, so the tails are cut relative to that plateau.
  const double lo = std::max(-quad.window, std::min(0.0, -off) - kTailKt * args.kt_s);
  const double hi = std::min(quad.window, std::max(0.0, -off) + kTailKt * args.kt_n);
  if (!(hi > lo)) return 0.0;

  std::vector<double> points{lo, hi};
  for (double s : quad.split_points) {
    const double x = dir == Direction::forward ? s : (s == -offset ? -off : s);
    if (x > lo && x < hi) points.push_back(x);
  }
  const BatchIntegrand f = [&args](const double* x, std::size_t n, double* y) {
    simd::pat_integrand(x, n, args, y);
  };
  const QuadResult r = integrate_gk15(f, std::move(points), quad.rel_tol, quad.abs_tol, quad.max_panels);
  return std::max(0.0, r.value);
}

double pat_integral(double offset, Direction dir, const SystemParams& params) {
  return pat_integral(offset, dir, params, make_quadrature(params, offset));
}

double forward_P(double e, const SystemParams& params) {
  return pat_integral(-e, Direction::forward, params);
}

double normal_junction_integral(double offset, double kt) {
  if (kt == 0.0) return std::max(0.0, -offset);
  const double x = offset / kt;
  if (std::abs(x) < 1e-8) return kt * (1.0 - 0.5 * x);
  // -offset / (1 - e^x) = offset / expm1(x)
  return offset / std::expm1(x);
}

double ChargeDistribution::p(int q) const {
  if (q < -q_max || q > q_max) return 0.0;
  return probs[static_cast<std::size_t>(q + q_max)];
}

namespace {

ChargeDistribution distribution_at(const SystemParams& params, int q_max, double m2) {
  const double v = params.bias_v;
  const double en = params.e_island;
  auto gamma_pm = [&](int q, int pm) {
    const double eq = en * (1.0 + 2.0 * pm * q);
    return m2 * (forward_P(v - eq, params) + forward_P(-v - eq, params));
  };
  // log p_q for q >= 0 via the product of Gamma^+_{q'} / Gamma^-_{q'+1}.
  std::vector<double> logp(q_max + 1, 0.0);
  for (int q = 0; q < q_max; ++q) {
    const double up = gamma_pm(q, +1);
    const double down = gamma_pm(q + 1, -1);
    if (up <= 0.0) {
      for (int k = q + 1; k <= q_max; ++k) logp[k] = -INFINITY;
      break;
    }
    if (down <= 0.0) throw NumericalError("charge_distribution: vanishing relaxation rate at q=" + std::to_string(q + 1));
    logp[q + 1] = logp[q] + std::log(up) - std::log(down);
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  ChargeDistribution d;
  d.q_max = q_max;
  d.probs.assign(2 * q_max + 1, 0.0);
  double z = 0.0;
  for (int q = -q_max; q <= q_max; ++q) {
    const double w = std::exp(logp[std::abs(q)] - top);
    d.probs[q + q_max] = w;
    z += w;
  }
  for (double& p : d.probs) p /= z;
  return d;
}

}  // namespace

ChargeDistribution charge_distribution(const SystemParams& params, int m) {
  const double m2 = displacement_diag_sq(m, params.rho_c);
  int q_max = params.q_max;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ChargeDistribution d = distribution_at(params, q_max, m2);
    if (d.p(q_max) < 1e-10) return d;
    q_max *= 2;
  }
  throw NumericalError("charge_distribution: p_q tail above 1e-10 at q_max=" + std::to_string(q_max / 2) +
                       "; raise q_max");
}

ChargeDistribution charge_distribution(const SystemParams& params) { return charge_distribution(params, 0); }

}  // namespace kpoqcr
