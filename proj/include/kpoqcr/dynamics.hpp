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

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kpoqcr/params.hpp"
#include "kpoqcr/rates.hpp"
#include "kpoqcr/spectrum.hpp"

namespace kpoqcr {

/// Reduced density matrix in the retained eigenbasis.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  double time = 0.0;  ///< [s]

  [[nodiscard]] int size() const { return static_cast<int>(rho.rows()); }
  [[nodiscard]] double trace() const { return rho.trace().real(); }
  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double min_eigenvalue() const;
  [[nodiscard]] double population(int i) const { return rho(i, i).real(); }
  /// <phi_{+a}|rho|phi_{+a}> with phi_{+a} = (phi_0 + phi_1)/sqrt2.
  [[nodiscard]] double p_alpha() const;
  [[nodiscard]] double p_minus_alpha() const;

  static DensityMatrix pure(const Eigen::VectorXcd& psi, double time = 0.0);
  static DensityMatrix basis(int n, int i);
  static DensityMatrix cat_plus_alpha(int n);
};

/// Row-major vectorization: index mu * n + mu'.
[[nodiscard]] Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
[[nodiscard]] Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v);

/// Superoperator of A rho B.
[[nodiscard]] Eigen::MatrixXcd sandwich(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// (kappa/2) D[a] + gamma_p D[a^dag a] on the retained eigenbasis, with
/// kappa and gamma_p given as kappa/2pi, gamma_p/2pi [Hz].
[[nodiscard]] Eigen::MatrixXcd lindblad_dissipators(const Spectrum& spectrum, double kappa, double gamma_p);

struct Generator {
  Eigen::MatrixXcd qcr;
  Eigen::MatrixXcd coherent;
  Eigen::MatrixXcd lindblad;

  [[nodiscard]] Eigen::MatrixXcd total() const { return qcr + coherent + lindblad; }
  [[nodiscard]] int n() const;
};

/// QCR superoperator built from the rate table alone.
[[nodiscard]] Eigen::MatrixXcd qcr_superoperator(const RateTable& rates);

/// Full generator; `rates` may be null when qcr_active is false.
[[nodiscard]] Generator assemble_generator(const RateTable* rates, const Spectrum& spectrum,
                                           const SystemParams& params, bool qcr_active);

/// Largest |sum over populations of a column|, relative to max |L|.
[[nodiscard]] double trace_annihilation_residual(const Eigen::MatrixXcd& l);

struct EvolveOptions {
  enum class Method { powered, stepwise };
  Method method = Method::powered;
  double step = 0.0;       ///< requested RK4 step [s]; 0 picks one automatically
  double step_factor = 0.1;
  double positivity_tol = -1e-6;
};

struct Trajectory {
  std::vector<DensityMatrix> states;
  std::vector<int> qcr_active;
  double max_trace_drift = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  int positivity_warnings = 0;
  double step = 0.0;  ///< largest RK4 step used [s]
};

/// Classical RK4 on d rho/dt = L rho, with L = before for t < t_qcr_on and
/// L = after otherwise. States are reported at every t_grid point.
[[nodiscard]] Trajectory evolve(const DensityMatrix& rho0, const Eigen::MatrixXcd& before,
                                const Eigen::MatrixXcd& after, double t_qcr_on, const std::vector<double>& t_grid,
                                const EvolveOptions& options = {});
[[nodiscard]] Trajectory evolve(const DensityMatrix& rho0, const Eigen::MatrixXcd& l,
                                const std::vector<double>& t_grid, const EvolveOptions& options = {});

struct SteadyState {
  DensityMatrix rho;
  double residual = 0.0;  ///< max |L rho| / max |L|
  int nullity = 0;
  std::string method;     ///< "null-space" or "integration"
};

[[nodiscard]] SteadyState steady_state(const Eigen::MatrixXcd& l);

struct HusimiGrid {
  double re_min = -4.0, re_max = 4.0;
  double im_min = -4.0, im_max = 4.0;
  int n_re = 121, n_im = 121;
};

struct HusimiMap {
  std::vector<double> re;
  std::vector<double> im;
  std::vector<double> q;  ///< row-major over (im, re)

  [[nodiscard]] double at(int i_im, int i_re) const { return q[static_cast<std::size_t>(i_im) * re.size() + i_re]; }
  /// sum Q dA / pi over the grid.
  [[nodiscard]] double normalization() const;
};

/// Q(a') = <a'|V rho V^dag|a'> on the grid.
[[nodiscard]] HusimiMap husimi_q(const DensityMatrix& rho, const Spectrum& spectrum, const HusimiGrid& grid);
/// Same for a density matrix already in the Fock basis.
[[nodiscard]] HusimiMap husimi_q_fock(const Eigen::MatrixXcd& rho_fock, const HusimiGrid& grid);

}  // namespace kpoqcr
