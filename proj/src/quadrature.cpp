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

#include "kpoqcr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

#include "kpoqcr/errors.hpp"

namespace kpoqcr {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  }
};

Panel gk15(const BatchIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 15> x{};
  std::array<double, 15> y{};
  for (int j = 0; j < 7; ++j) {
    x[2 * j] = c - h * kXgk[j];
    x[2 * j + 1] = c + h * kXgk[j];
  }
  x[14] = c;
  f(x.data(), x.size(), y.data());

  const double fc = y[14];
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_k = std::abs(kron);
  for (int j = 0; j < 7; ++j) {
    const double s = y[2 * j] + y[2 * j + 1];
    kron += kWgk[j] * s;
    abs_k += kWgk[j] * (std::abs(y[2 * j]) + std::abs(y[2 * j + 1]));
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  const double mean = 0.5 * kron;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(y[2 * j] - mean) + std::abs(y[2 * j + 1] - mean));

  Panel p{a, b, kron * h, std::abs((kron - gauss) * h)};
  asc *= std::abs(h);
  abs_k *= std::abs(h);
  if (asc != 0.0 && p.error != 0.0) p.error = asc * std::min(1.0, std::pow(200.0 * p.error / asc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_k;
  if (abs_k > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    p.error = std::max(p.error, roundoff);
  }
  return p;
}

}  // namespace

QuadResult integrate_gk15(const BatchIntegrand& f, std::vector<double> points, double rel_tol, double abs_tol,
                          int max_panels) {
  QuadResult out;
  if (points.size() < 2) return out;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) return out;

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  std::vector<Panel> done;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Panel p = gk15(f, points[i], points[i + 1]);
    total += p.value;
    err += p.error;
    queue.push(p);
  }
  int panels = static_cast<int>(queue.size());

  while (!queue.empty() && err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels >= max_panels) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "quadrature: panel budget %d exhausted, achieved abs error %.3g (rel %.3g)", max_panels,
                    err, total != 0.0 ? err / std::abs(total) : err);
      throw NumericalError(buf);
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Cannot split further in floating point; accept the panel as is.
      done.push_back(worst);
      continue;
    }
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  out.value = 0.0;
  out.abs_error = 0.0;
  for (const Panel& p : done) {
    out.value += p.value;
    out.abs_error += p.error;
  }
  out.panels = panels;
  return out;
}

}  // namespace kpoqcr
