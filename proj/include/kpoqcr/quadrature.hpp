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

#include <cstddef>
#include <functional>
#include <vector>

namespace kpoqcr {

/// Integrand evaluated on a batch of abscissae: y[i] = f(x[i]).
using BatchIntegrand = std::function<void(const double* x, std::size_t n, double* y)>;

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [points.front(),
/// points.back()] with every interior point used as a mandatory panel edge.
/// Stops when the summed error estimate is below max(abs_tol, rel_tol |I|);
/// throws NumericalError with the achieved tolerance once max_panels is hit.
[[nodiscard]] QuadResult integrate_gk15(const BatchIntegrand& f, std::vector<double> points, double rel_tol,
                                        double abs_tol, int max_panels = 1 << 14);

}  // namespace kpoqcr
