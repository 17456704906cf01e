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

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kpoqcr/fock.hpp"
#include "kpoqcr/params.hpp"

namespace kpoqcr {

enum class Parity { even, odd };

/// H_KPO^(RF)/h in Hz: delta a^dag a - (chi/2) a^dag a^dag a a + beta (a^2 + a^dag^2).
[[nodiscard]] Eigen::MatrixXd kpo_hamiltonian(const SystemParams& params, const FockOperators& ops);
[[nodiscard]] Eigen::MatrixXd kpo_hamiltonian(const SystemParams& params);

/// Retained eigenstates of the rotating-frame KPO Hamiltonian.
///
/// States are sorted by descending rotating-frame energy, which is the
/// ascending lab-frame order: index 0/1 are the even/odd cat pair. Inside
/// every block of levels degenerate within match_tol the basis is fixed by
/// diagonalizing parity, with the even state first. Each vector is real and
/// signed so that its first non-negligible Fock amplitude is positive.
/// Immutable after construction.
struct Spectrum {
  std::vector<double> energies;   ///< E/h [Hz], raw eigenvalues
  Eigen::MatrixXcd vectors;       ///< n_fock x n_keep, columns are states
  std::vector<Parity> parity;
  std::vector<std::pair<int, int>> degeneracy_pairs;
  std::vector<int> block;         ///< degenerate-block label per state
  double omega_rf = 0.0;          ///< omega_p/2 [Hz]

  [[nodiscard]] int size() const { return static_cast<int>(energies.size()); }
  [[nodiscard]] int n_fock() const { return static_cast<int>(vectors.rows()); }

  /// Energies with every degenerate block replaced by its mean; the
  /// matching conditions and coherent phases use these.
  [[nodiscard]] std::vector<double> snapped_energies() const;

  /// Projects a Fock-space operator onto the retained eigenbasis (V^dag O V).
  [[nodiscard]] Eigen::MatrixXcd project(const Eigen::MatrixXd& op) const;

  /// Fock-basis density matrix V rho V^dag.
  [[nodiscard]] Eigen::MatrixXcd to_fock(const Eigen::MatrixXcd& rho) const;
};

[[nodiscard]] Spectrum diagonalize_kpo(const Eigen::MatrixXd& hamiltonian, const SystemParams& params);

/// Convenience: builds H at params.n_fock and diagonalizes it.
[[nodiscard]] Spectrum solve_spectrum(const SystemParams& params);

}  // namespace kpoqcr
