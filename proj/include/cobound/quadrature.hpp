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

#ifndef COBOUND_QUADRATURE_HPP
#define COBOUND_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <span>

namespace cobound::quad {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;        // absolute error estimate, >= 0
  int subdivisions = 0;
  std::int64_t evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::int64_t max_evaluations = 1'000'000;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Breakpoints inside (a, b)
/// start the partition; the cell with the largest error is bisected until the
/// total error meets the tolerance or the evaluation budget runs out.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {}, const QuadratureOptions& options = {});

}  // namespace cobound::quad

#endif  // COBOUND_QUADRATURE_HPP
