// Copyright 2026 The cobound Authors.
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

#include "cobound/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "cobound/error.hpp"

namespace cobound::quad {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Cell {
  double a, b, value, error;
};

struct ByError {
  bool operator()(const Cell& x, const Cell& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;  // deterministic tie-break
  }
};

Cell kronrod(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kKronrod[7];
  double g = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kNodes[static_cast<std::size_t>(j)];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrod[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) g += kGauss[static_cast<std::size_t>(j / 2)] * s;
  }
  const double value = k * h;
  double error = std::abs((k - g) * h);
  if (!std::isfinite(value)) throw ConvergenceError("integrand is not finite on a quadrature cell", INFINITY);
  // guard against round-off hiding a tiny difference
  error = std::max(error, 50.0 * 2.220446049250313e-16 * std::abs(value));
  return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& options) {
  require(a <= b, "integration bounds must satisfy a <= b");
  QuadratureResult out;
  if (a == b) return out;
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Cell, std::vector<Cell>, ByError> heap;
  double total = 0.0, error = 0.0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const Cell cell = kronrod(f, cuts[j], cuts[j + 1]);
    out.evaluations += 15;
    total += cell.value;
    error += cell.error;
    heap.push(cell);
  }
  auto done = [&] { return error <= std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (!done()) {
    if (out.evaluations + 30 > options.max_evaluations) {
      out.converged = false;
      break;
    }
    const Cell worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;  // cell can no longer be split in double precision
      break;
    }
    heap.pop();
    const Cell left = kronrod(f, worst.a, mid);
    const Cell right = kronrod(f, mid, worst.b);
    out.evaluations += 30;
    ++out.subdivisions;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-add in a fixed order so the value does not carry the running-sum drift.
  std::vector<Cell> cells;
  cells.reserve(heap.size());
  while (!heap.empty()) {
    cells.push_back(heap.top());
    heap.pop();
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.a < y.a; });
  out.value = 0.0;
  out.error = 0.0;
  for (const Cell& c : cells) {
    out.value += c.value;
    out.error += c.error;
  }
  return out;
}

}  // namespace cobound::quad
