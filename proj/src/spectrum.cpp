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

#include "kpoqcr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kpoqcr/errors.hpp"

namespace kpoqcr {

Eigen::MatrixXd kpo_hamiltonian(const SystemParams& params, const FockOperators& ops) {
  const Eigen::MatrixXd a2 = ops.a * ops.a;
  const Eigen::MatrixXd adag2 = ops.adag * ops.adag;
  Eigen::MatrixXd h = params.delta_kpo * ops.n - 0.5 * params.chi * (adag2 * a2) +
                      params.beta * (a2 + adag2);
  // a^2 and a^dag^2 are exact transposes, so h is symmetric up to rounding.
  return 0.5 * (h + h.transpose());
}

Eigen::MatrixXd kpo_hamiltonian(const SystemParams& params) {
  return kpo_hamiltonian(params, build_fock_operators(params.n_fock));
}

namespace {

constexpr double kTailWeightMax = 1e-8;
constexpr int kTailWidth = 5;
constexpr double kSignThreshold = 1e-8;

double tail_weight(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  const int from = std::max(0, n - kTailWidth);
  return v.segment(from, n - from).squaredNorm();
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    if (std::abs(v(m)) > kSignThreshold) {
      if (v(m) < 0.0) v = -v;
      return;
    }
  }
}

double parity_expectation(const Eigen::VectorXd& v) {
  double p = 0.0;
  for (Eigen::Index m = 0; m < v.size(); ++m) p += (m % 2 == 0 ? 1.0 : -1.0) * v(m) * v(m);
  return p;
}

}  // namespace

Spectrum diagonalize_kpo(const Eigen::MatrixXd& hamiltonian, const SystemParams& params) {
  const int n_fock = static_cast<int>(hamiltonian.rows());
  if (hamiltonian.cols() != n_fock) throw ConfigError("diagonalize_kpo: H must be square");
  if ((hamiltonian - hamiltonian.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff())) {
    throw ConfigError("diagonalize_kpo: H is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalize_kpo: eigensolver failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  // Descending rotating-frame energy, dropping truncation-polluted states.
  std::vector<int> order;
  for (int k = n_fock - 1; k >= 0; --k) {
    if (tail_weight(evecs.col(k)) < kTailWeightMax) order.push_back(k);
  }
  const int n_keep = params.n_keep;
  if (static_cast<int>(order.size()) < n_keep) {
    throw NumericalError("diagonalize_kpo: only " + std::to_string(order.size()) +
                         " truncation-clean states, need n_keep=" + std::to_string(n_keep) +
                         "; increase n_fock");
  }

  // Keep one extra clean state (when available) so a degenerate partner of
  // the last retained level is handled inside its block.
  const int n_work = std::min<int>(static_cast<int>(order.size()), n_keep + 1);
  std::vector<double> energies(n_work);
  Eigen::MatrixXd vecs(n_fock, n_work);
  for (int i = 0; i < n_work; ++i) {
    energies[i] = evals(order[i]);
    vecs.col(i) = evecs.col(order[i]);
  }

  // Degenerate blocks: consecutive runs with spacing below match_tol.
  std::vector<int> block(n_work, 0);
  for (int i = 1; i < n_work; ++i) {
    block[i] = block[i - 1] + (std::abs(energies[i - 1] - energies[i]) < params.match_tol ? 0 : 1);
  }

  std::vector<Parity> parity(n_work, Parity::even);
  int start = 0;
  while (start < n_work) {
    int stop = start;
    while (stop < n_work && block[stop] == block[start]) ++stop;
    const int len = stop - start;
    if (len > 1) {
      // Rotate the degenerate block onto parity eigenvectors, even first.
      const Eigen::MatrixXd sub = vecs.middleCols(start, len);
      Eigen::VectorXd sign(n_fock);
      for (int m = 0; m < n_fock; ++m) sign(m) = (m % 2 == 0) ? 1.0 : -1.0;
      const Eigen::MatrixXd p_block = sub.transpose() * sign.asDiagonal() * sub;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(0.5 * (p_block + p_block.transpose()));
      // Ascending eigenvalues: odd (-1) first; reverse for even first.
      Eigen::MatrixXd rotated = sub * ps.eigenvectors().rowwise().reverse();
      for (int j = 0; j < len; ++j) {
        vecs.col(start + j) = rotated.col(j);
        // Rayleigh quotient keeps each rotated state's own energy.
        energies[start + j] = rotated.col(j).dot(hamiltonian * rotated.col(j));
      }
    }
    for (int j = start; j < stop; ++j) {
      fix_sign(vecs.col(j));
      parity[j] = parity_expectation(vecs.col(j)) > 0.0 ? Parity::even : Parity::odd;
      // Drop rounding-level weight on the opposite parity sector.
      for (int m = (parity[j] == Parity::even ? 1 : 0); m < n_fock; m += 2) vecs(m, j) = 0.0;
      vecs.col(j).normalize();
    }
    start = stop;
  }

  Spectrum s;
  s.omega_rf = params.omega_rf();
  s.energies.assign(energies.begin(), energies.begin() + n_keep);
  s.vectors = vecs.leftCols(n_keep).cast<std::complex<double>>();
  s.parity.assign(parity.begin(), parity.begin() + n_keep);
  s.block.assign(block.begin(), block.begin() + n_keep);
  for (int i = 0; i + 1 < n_keep; ++i) {
    for (int j = i + 1; j < n_keep && s.block[j] == s.block[i]; ++j) s.degeneracy_pairs.emplace_back(i, j);
  }

  if (s.parity[0] != Parity::even || s.parity[1] != Parity::odd) {
    throw NumericalError("diagonalize_kpo: top two states are not an even/odd pair");
  }
  return s;
}

Spectrum solve_spectrum(const SystemParams& params) {
  params.validate();
  return diagonalize_kpo(kpo_hamiltonian(params), params);
}

std::vector<double> Spectrum::snapped_energies() const {
  std::vector<double> out(energies);
  int start = 0;
  const int n = size();
  while (start < n) {
    int stop = start;
    double sum = 0.0;
    while (stop < n && block[stop] == block[start]) sum += energies[stop++];
    for (int j = start; j < stop; ++j) out[j] = sum / (stop - start);
    start = stop;
  }
  return out;
}

Eigen::MatrixXcd Spectrum::project(const Eigen::MatrixXd& op) const {
  return vectors.adjoint() * op.cast<std::complex<double>>() * vectors;
}

Eigen::MatrixXcd Spectrum::to_fock(const Eigen::MatrixXcd& rho) const {
  return vectors * rho * vectors.adjoint();
}

}  // namespace kpoqcr
