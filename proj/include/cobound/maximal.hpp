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

#ifndef COBOUND_MAXIMAL_HPP
#define COBOUND_MAXIMAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cobound/dynamics.hpp"
#include "cobound/rational.hpp"
#include "json.hpp"

namespace cobound::maximal {

/// Fixed-point scale for exact checks: values and thresholds must be integer
/// multiples of 2^-kScaleBits.
inline constexpr int kScaleBits = 20;
inline constexpr int kMaxEnumerationBits = 20;

/// h(omega) = values[level(omega, i)], a function of the first i digits.
struct LevelFunction {
  int i = 0;
  std::vector<double> values;  // size 2^i

  static LevelFunction constant(int i, double c);
  static LevelFunction indicator_of_zero_cylinder(int i, int cylinder_depth);

  double operator()(const dynamics::OdometerPoint& point) const;
};

/// max_{1<=N<=n_max} |S_N(h)|/N along the orbit given by h(k) = h(T^k omega).
double truncated_mstar(const dynamics::OrbitEvaluator& h, std::int64_t n_max);
double truncated_mstar(const dynamics::OdometerFunction& h, const dynamics::OdometerPoint& point,
                       std::int64_t n_max);

struct ThresholdRow {
  double t = 0.0;
  Rational measure;               // mu{M* >= t}
  double expectation = 0.0;       // E[|h| 1{M* >= t}]
  double slack_maximal = 0.0;     // expectation - t measure
  bool holds_maximal = true;
  double weak_restricted = 0.0;   // ||h 1(A_t)||_{q,inf}
  double slack_weak = 0.0;        // q/(q-1) weak_restricted - t measure^{1/q}
  bool holds_weak = true;
  double slack_weak_global = 0.0;  // same with ||h||_{q,inf}
  bool holds_weak_global = true;
};

struct MaximalReport {
  int precision = 0;
  std::int64_t n_max = 0;
  double q = 2.0;
  bool exact_weak = false;        // weak-type bound compared in integers (q = 2) or in long double
  double weak_norm_h = 0.0;       // ||h||_{q,inf}
  double mstar_norm_q = 0.0;      // ||M*||_q over all enumerated points
  std::vector<ThresholdRow> rows;

  std::size_t violations_maximal() const;
  std::size_t violations_weak() const;
  std::size_t violations_weak_global() const;
  nlohmann::ordered_json to_json() const;
  /// One row per threshold.
  std::string to_csv() const;
};

/// Exhaustive check of the maximal inequality and its weak-type corollary over all 2^B points of
/// the truncated odometer.
MaximalReport maximal_inequality_report(const LevelFunction& h, int precision, std::int64_t n_max,
                                        std::span<const double> thresholds, double q,
                                        unsigned workers = 1);

/// `count` thresholds spread evenly over (0, top], rounded to the dyadic scale.
std::vector<double> dyadic_threshold_grid(double top, std::size_t count);

}  // namespace cobound::maximal

#endif  // COBOUND_MAXIMAL_HPP
