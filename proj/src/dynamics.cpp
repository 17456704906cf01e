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

#include "kpoqcr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "kpoqcr/errors.hpp"
#include "kpoqcr/fock.hpp"
#include "kpoqcr/simd/kernels.hpp"

namespace kpoqcr {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

double DensityMatrix::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::p_alpha() const {
  return 0.5 * (rho(0, 0).real() + rho(1, 1).real()) + rho(0, 1).real();
}

double DensityMatrix::p_minus_alpha() const {
  return 0.5 * (rho(0, 0).real() + rho(1, 1).real()) - rho(0, 1).real();
}

DensityMatrix DensityMatrix::pure(const VectorXcd& psi, double time) {
  DensityMatrix d;
  d.rho = psi * psi.adjoint();
  d.time = time;
  return d;
}

DensityMatrix DensityMatrix::basis(int n, int i) {
  if (i < 0 || i >= n) throw ConfigError("DensityMatrix::basis: index out of range");
  DensityMatrix d;
  d.rho = MatrixXcd::Zero(n, n);
  d.rho(i, i) = 1.0;
  return d;
}

DensityMatrix DensityMatrix::cat_plus_alpha(int n) {
  if (n < 2) throw ConfigError("DensityMatrix::cat_plus_alpha: need two states");
  DensityMatrix d;
  d.rho = MatrixXcd::Zero(n, n);
  d.rho.topLeftCorner(2, 2).setConstant(0.5);
  return d;
}

VectorXcd vectorize(const MatrixXcd& rho) {
  const Eigen::Index n = rho.rows();
  VectorXcd v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = rho(i, j);
  return v;
}

MatrixXcd unvectorize(const VectorXcd& v) {
  const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw ConfigError("unvectorize: length is not a square");
  MatrixXcd rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  return rho;
}

MatrixXcd sandwich(const MatrixXcd& a, const MatrixXcd& b) {
  const Eigen::Index n = a.rows();
  MatrixXcd s(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) s.block(i * n, k * n, n, n) = a(i, k) * b.transpose();
  return s;
}

namespace {

MatrixXcd dissipator(const MatrixXcd& o) {
  const Eigen::Index n = o.rows();
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  const MatrixXcd ono = o.adjoint() * o;
  return 2.0 * sandwich(o, o.adjoint()) - sandwich(ono, id) - sandwich(id, ono);
}

}  // namespace

MatrixXcd lindblad_dissipators(const Spectrum& spectrum, double kappa, double gamma_p) {
  const int n = spectrum.size();
  MatrixXcd l = MatrixXcd::Zero(n * n, n * n);
  if (kappa == 0.0 && gamma_p == 0.0) return l;
  const FockOperators ops = build_fock_operators(spectrum.n_fock());
  if (kappa != 0.0) l += 0.5 * constants::kTwoPi * kappa * dissipator(spectrum.project(ops.a));
  if (gamma_p != 0.0) l += constants::kTwoPi * gamma_p * dissipator(spectrum.project(ops.n));
  return l;
}

int Generator::n() const {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(coherent.rows()))));
}

MatrixXcd qcr_superoperator(const RateTable& rates) {
  const int n = rates.size();
  MatrixXcd l = MatrixXcd::Zero(n * n, n * n);
  for (int mu = 0; mu < n; ++mu) {
    for (int mup = 0; mup < n; ++mup) {
      const int row = mu * n + mup;
      for (int nu = 0; nu < n; ++nu)
        for (int nup = 0; nup < n; ++nup) l(row, nu * n + nup) += rates.gamma1(mu, mup, nu, nup);
      for (int xi = 0; xi < n; ++xi) {
        l(row, xi * n + mup) += rates.gamma2(mu, mup, xi);
        l(row, mu * n + xi) += rates.gamma3(mu, mup, xi);
      }
    }
  }
  // Population decay is the small remainder of the elastic term cancelling against K2 (both ~1e3 times
  // larger); taking it from the trace identity keeps Tr(L rho) = 0 to round-off of the inelastic rates.
  for (int nu = 0; nu < n; ++nu) {
    const int col = nu * n + nu;
    cplx out{0.0, 0.0};
    for (int mu = 0; mu < n; ++mu)
      if (mu != nu) out += l(mu * n + mu, col);
    l(col, col) = -out;
  }
  return l;
}

Generator assemble_generator(const RateTable* rates, const Spectrum& spectrum, const SystemParams& params,
                             bool qcr_active) {
  const int n = spectrum.size();
  Generator g;
  if (qcr_active) {
    if (rates == nullptr) throw ConfigError("assemble_generator: QCR active but no rate table");
    if (rates->size() != n) throw ConfigError("assemble_generator: rate table / spectrum size mismatch");
    g.qcr = qcr_superoperator(*rates);
  } else {
    g.qcr = MatrixXcd::Zero(n * n, n * n);
  }
  const std::vector<double> e = spectrum.snapped_energies();
  g.coherent = MatrixXcd::Zero(n * n, n * n);
  for (int mu = 0; mu < n; ++mu)
    for (int mup = 0; mup < n; ++mup)
      g.coherent(mu * n + mup, mu * n + mup) = cplx(0.0, -constants::kTwoPi * (e[mu] - e[mup]));
  g.lindblad = lindblad_dissipators(spectrum, params.kappa, params.gamma_p);
  return g;
}

double trace_annihilation_residual(const MatrixXcd& l) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(l.rows()))));
  const double scale = l.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index c = 0; c < l.cols(); ++c) {
    cplx s{0.0, 0.0};
    for (int i = 0; i < n; ++i) s += l(i * n + i, c);
    worst = std::max(worst, std::abs(s));
  }
  return worst / scale;
}

namespace {

double row_norm(const MatrixXcd& l) { return l.cwiseAbs().rowwise().sum().maxCoeff(); }

// One RK4 step is I + B; B = hL (I + hL/2 (I + hL/3 (I + hL/4))). Keeping B instead of I + B avoids
// rounding 1 + x in every entry, an error that would otherwise repeat identically in each of the k steps.
MatrixXcd rk4_increment(const MatrixXcd& l, double h) {
  const Eigen::Index dim = l.rows();
  const MatrixXcd hl = h * l;
  MatrixXcd m = MatrixXcd::Identity(dim, dim) + hl / 4.0;
  m = MatrixXcd::Identity(dim, dim) + (hl * m) / 3.0;
  m = MatrixXcd::Identity(dim, dim) + (hl * m) / 2.0;
  return hl * m;
}

// (I + A)(I + B) = I + (A + B + AB).
MatrixXcd compose_increments(const MatrixXcd& a, const MatrixXcd& b) { return a + b + a * b; }

// C with I + C = (I + B)^k.
MatrixXcd increment_power(MatrixXcd base, unsigned long long k) {
  MatrixXcd out = MatrixXcd::Zero(base.rows(), base.cols());
  while (k > 0) {
    if (k & 1ULL) out = compose_increments(out, base);
    k >>= 1ULL;
    if (k > 0) base = compose_increments(base, base);
  }
  return out;
}

class Stepper {
 public:
  Stepper(const MatrixXcd& l, const EvolveOptions& options) : l_(l), options_(options) {
    const double norm = row_norm(l);
    h_max_ = norm > 0.0 ? options.step_factor / norm : std::numeric_limits<double>::infinity();
    if (options.step > 0.0) {
      double h = options.step;
      int halvings = 0;
      while (h > h_max_ && halvings < 10) {
        h *= 0.5;
        ++halvings;
      }
      if (h > h_max_) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "evolve: step %.3g s exceeds stability bound %.3g s after 2^10 halvings",
                      options.step, h_max_);
        throw NumericalError(buf);
      }
      h_max_ = h;
    }
    if (options.method == EvolveOptions::Method::stepwise) {
      const Eigen::Index dim = l.rows();
      re_.resize(static_cast<std::size_t>(dim * dim));
      im_.resize(re_.size());
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) {
          re_[static_cast<std::size_t>(r * dim + c)] = l(r, c).real();
          im_[static_cast<std::size_t>(r * dim + c)] = l(r, c).imag();
        }
    }
  }

  double advance(VectorXcd& v, double dt) {
    if (dt <= 0.0) return 0.0;
    if (l_.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    const double ratio = dt / h_max_;
    const auto k = static_cast<unsigned long long>(std::max(1.0, std::ceil(ratio * (1.0 - 1e-12))));
    const double h = dt / static_cast<double>(k);
    if (options_.method == EvolveOptions::Method::powered) {
      auto it = cache_.find(dt);
      if (it == cache_.end()) it = cache_.emplace(dt, increment_power(rk4_increment(l_, h), k)).first;
      v += it->second * v;
    } else {
      for (unsigned long long s = 0; s < k; ++s) step(v, h);
    }
    return h;
  }

 private:
  void apply(const VectorXcd& x, VectorXcd& y) {
    const std::size_t dim = static_cast<std::size_t>(x.size());
    xr_.resize(dim);
    xi_.resize(dim);
    yr_.resize(dim);
    yi_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      xr_[i] = x(static_cast<Eigen::Index>(i)).real();
      xi_[i] = x(static_cast<Eigen::Index>(i)).imag();
    }
    simd::cmatvec(re_.data(), im_.data(), xr_.data(), xi_.data(), dim, yr_.data(), yi_.data());
    y.resize(x.size());
    for (std::size_t i = 0; i < dim; ++i) y(static_cast<Eigen::Index>(i)) = cplx(yr_[i], yi_[i]);
  }

  void step(VectorXcd& v, double h) {
    apply(v, k1_);
    apply(v + 0.5 * h * k1_, k2_);
    apply(v + 0.5 * h * k2_, k3_);
    apply(v + h * k3_, k4_);
    v += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  const MatrixXcd& l_;
  EvolveOptions options_;
  double h_max_ = 0.0;
  std::map<double, MatrixXcd> cache_;
  std::vector<double> re_, im_, xr_, xi_, yr_, yi_;
  VectorXcd k1_, k2_, k3_, k4_;
};

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const MatrixXcd& before, const MatrixXcd& after, double t_qcr_on,
                  const std::vector<double>& t_grid, const EvolveOptions& options) {
  const int n = rho0.size();
  if (before.rows() != n * n || after.rows() != n * n) throw ConfigError("evolve: generator dimension mismatch");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("evolve: time grid must be strictly increasing");
  }
  if (!t_grid.empty() && t_grid.front() < rho0.time) throw ConfigError("evolve: time grid starts before rho0");

  Stepper s_before(before, options);
  Stepper s_after(after, options);
  Trajectory traj;
  VectorXcd v = vectorize(rho0.rho);
  const double tr0 = rho0.trace();
  double t = rho0.time;

  for (double target : t_grid) {
    if (t < t_qcr_on && target > t_qcr_on) {
      traj.step = std::max(traj.step, s_before.advance(v, t_qcr_on - t));
      t = t_qcr_on;
    }
    Stepper& s = (t < t_qcr_on) ? s_before : s_after;
    traj.step = std::max(traj.step, s.advance(v, target - t));
    t = target;

    DensityMatrix d;
    d.rho = unvectorize(v);
    d.time = t;
    traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(d.trace() - tr0));
    const double ev = d.min_eigenvalue();
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, ev);
    if (ev < options.positivity_tol) ++traj.positivity_warnings;
    traj.qcr_active.push_back(t >= t_qcr_on ? 1 : 0);
    traj.states.push_back(std::move(d));
  }
  return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const MatrixXcd& l, const std::vector<double>& t_grid,
                  const EvolveOptions& options) {
  return evolve(rho0, l, l, std::numeric_limits<double>::infinity(), t_grid, options);
}

namespace {

double residual_of(const MatrixXcd& l, const MatrixXcd& rho) {
  const double scale = l.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (l * vectorize(rho)).cwiseAbs().maxCoeff() / scale;
}

MatrixXcd clean(const MatrixXcd& rho) {
  MatrixXcd h = 0.5 * (rho + rho.adjoint());
  return h / h.trace().real();
}

}  // namespace

SteadyState steady_state(const MatrixXcd& l) {
  const Eigen::Index dim = l.rows();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (static_cast<Eigen::Index>(n) * n != dim || l.cols() != dim) throw ConfigError("steady_state: bad generator");

  Eigen::BDCSVD<MatrixXcd> svd(l);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = std::max<double>(100.0, static_cast<double>(dim)) * std::numeric_limits<double>::epsilon() * smax;
  int nullity = 0;
  double slowest = smax;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol) {
      ++nullity;
    } else {
      slowest = std::min(slowest, sv(i));
    }
  }

  SteadyState out;
  out.nullity = std::max(nullity, 1);
  if (nullity <= 1) {
    MatrixXcd a = l;
    VectorXcd b = VectorXcd::Zero(dim);
    a.row(0).setZero();
    for (int i = 0; i < n; ++i) a(0, i * n + i) = 1.0;
    b(0) = 1.0;
    Eigen::PartialPivLU<MatrixXcd> lu(a);
    VectorXcd x = lu.solve(b);
    for (int it = 0; it < 2; ++it) x += lu.solve(b - a * x);
    out.rho.rho = clean(unvectorize(x));
    out.residual = residual_of(l, out.rho.rho);
    out.method = "null-space";
    if (out.residual >= 1e-10) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "steady_state: residual %.3g exceeds 1e-10", out.residual);
      throw NumericalError(buf);
    }
    return out;
  }

  // Numerically degenerate null space: integrate two probes for a long time.
  const double t_long = 50.0 / (slowest > 0.0 ? slowest : 1.0);
  DensityMatrix mixed;
  mixed.rho = MatrixXcd::Identity(n, n) / static_cast<double>(n);
  const DensityMatrix ground = DensityMatrix::basis(n, 0);
  const Trajectory ta = evolve(mixed, l, {t_long});
  const Trajectory tb = evolve(ground, l, {t_long});
  const MatrixXcd ra = ta.states.back().rho;
  const MatrixXcd rb = tb.states.back().rho;
  const double diff = (ra - rb).cwiseAbs().maxCoeff();
  if (diff > 1e-6) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "steady_state: %d-dimensional null space, probe states disagree by %.3g; no unique stationary state",
                  nullity, diff);
    throw DegenerateInputError(buf);
  }
  out.rho.rho = clean(0.5 * (ra + rb));
  out.residual = residual_of(l, out.rho.rho);
  out.method = "integration";
  return out;
}

double HusimiMap::normalization() const {
  if (re.size() < 2 || im.size() < 2) return 0.0;
  const double da = (re.back() - re.front()) / static_cast<double>(re.size() - 1) *
                    (im.back() - im.front()) / static_cast<double>(im.size() - 1);
  double s = 0.0;
  for (double v : q) s += v;
  return s * da / constants::kPi;
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
  return out;
}

}  // namespace

HusimiMap husimi_q_fock(const MatrixXcd& rho_fock, const HusimiGrid& grid) {
  if (grid.n_re < 1 || grid.n_im < 1) throw ConfigError("husimi_q: grid needs at least one point per axis");
  const double r2 = std::max(grid.re_min * grid.re_min, grid.re_max * grid.re_max) +
                    std::max(grid.im_min * grid.im_min, grid.im_max * grid.im_max);
  if (r2 > 400.0) throw ConfigError("husimi_q: grid reaches |alpha'|^2 > 400");
  HusimiMap map;
  map.re = linspace(grid.re_min, grid.re_max, grid.n_re);
  map.im = linspace(grid.im_min, grid.im_max, grid.n_im);
  map.q.resize(map.re.size() * map.im.size());
  const int n_fock = static_cast<int>(rho_fock.rows());
  for (std::size_t j = 0; j < map.im.size(); ++j) {
    for (std::size_t i = 0; i < map.re.size(); ++i) {
      const VectorXcd c = coherent_amplitudes(cplx(map.re[i], map.im[j]), n_fock);
      map.q[j * map.re.size() + i] = (c.adjoint() * rho_fock * c)(0, 0).real();
    }
  }
  return map;
}

HusimiMap husimi_q(const DensityMatrix& rho, const Spectrum& spectrum, const HusimiGrid& grid) {
  return husimi_q_fock(spectrum.to_fock(rho.rho), grid);
}

}  // namespace kpoqcr
