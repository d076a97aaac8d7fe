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

#ifndef COBOUND_BERNOULLI_CRITERIA_HPP
#define COBOUND_BERNOULLI_CRITERIA_HPP

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cobound/criteria.hpp"
#include "cobound/quadrature.hpp"

namespace cobound::bern {

using quad::QuadratureResult;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct FunctionOnUnitInterval {
  std::string name;
  std::function<double(double)> eval;
  bool centered = false;
  std::optional<double> mean;               // exact integral over [0, 1] when known
  std::vector<double> jumps;                // discontinuities inside (0, 1)
  bool singular_at_zero = false;            // unbounded near 0
  double integrability = kInf;              // sup of r with f in L^r
  std::optional<double> holder_exponent;    // modulus-of-continuity hint

  double operator()(double x) const { return eval(x); }

  static FunctionOnUnitInterval constant(double c);
  /// slope x + intercept; centered when intercept = -slope/2.
  static FunctionOnUnitInterval affine(double slope, double intercept);
  static FunctionOnUnitInterval cosine(int frequency, double amplitude = 1.0);
  /// 1_{[0, c]} minus c when centered.
  static FunctionOnUnitInterval indicator_step(double c, bool centered = true);
  /// sum_{k<terms} a^k cos(2 pi b^k x).
  static FunctionOnUnitInterval weierstrass(double a, int b, int terms);
  /// x^{-s} - 1/(1-s), 0 < s < 1.
  static FunctionOnUnitInterval power(double s);
  /// x^{-s} (log(e/x))^{-w}, not centered; a borderline-divergent example.
  static FunctionOnUnitInterval log_singular(double s, double w);
};

/// Integral of f over [0, 1]: the known mean, else adaptive quadrature.
QuadratureResult mean_value(const FunctionOnUnitInterval& f);

/// Throws PreconditionError if f is flagged centered but its integral exceeds 1e-8.
void check_centering(const FunctionOnUnitInterval& f);

/// f~(x) = f(x) - f(x/2)/2 - f((x+1)/2)/2.
FunctionOnUnitInterval ftilde(const FunctionOnUnitInterval& f);

/// (h(x/2) + h((x+1)/2))/2.
FunctionOnUnitInterval doubling_average(const FunctionOnUnitInterval& h);

/// 2^-n sum_j f((x+j)/2^n) minus the integral of f; 1 <= n <= 30.
double conditional_expectation(const FunctionOnUnitInterval& f, int n, double x);

/// Breakpoints of x -> conditional_expectation(f, n, x) in (0, 1).
std::vector<double> conditional_expectation_breaks(const FunctionOnUnitInterval& f, int n);

/// ||E[f o T^n | M]||_q^q by quadrature over x.
QuadratureResult conditional_norm_power(const FunctionOnUnitInterval& f, int n, double q,
                                        const quad::QuadratureOptions& options = {});

/// 2^n int int 1{|x-y| <= 2^-n} |f(x) - f(y)|^q dx dy.
QuadratureResult local_difference_energy(const FunctionOnUnitInterval& f, int n, double q,
                                         const quad::QuadratureOptions& options = {});

struct Lemma32Result {
  int n = 0;
  double q = 2.0;
  QuadratureResult lhs;             // ||E[f o T^n|M]||_q^q
  QuadratureResult rhs;             // 2^n local energy of f
  QuadratureResult lhs_coboundary;  // ||(I-U)E[f o T^n|M]||_q^q
  QuadratureResult rhs_coboundary;  // 2^n local energy of f~
  double rhs_coboundary_literal = 0.0;  // prefactor 2 instead of 2^n
  double combined_error = 0.0;
  CriteriaReport report;
};

/// q > 1, 1 <= n <= 20. Quadrature failure raises ConvergenceError.
Lemma32Result lemma32_check(const FunctionOnUnitInterval& f, int n, double q);

struct ShellValue {
  int m = 0;        // u in [2^-(m+1), 2^-m]
  double value = 0.0;
  double error = 0.0;
};

struct CriterionIntegral {
  QuadratureResult result;  // value includes the extrapolated tail when convergent
  bool divergent = false;
  double tail_estimate = 0.0;
  double tail_slope = 0.0;  // log-log slope of the last shells
  std::vector<ShellValue> shells;
};

/// int int |f(x)-f(y)|^q / |x-y| (log 1/|x-y|)^w dx dy over dyadic shells in u = |x-y|.
CriterionIntegral criterion_integral(const FunctionOnUnitInterval& f, double q, double w,
                                     int max_shells = 60, double abs_tol = 1e-8);

struct SeriesRow {
  int n = 0;
  double norm = 0.0;             // ||E[f o T^n|M]||_q
  double norm_coboundary = 0.0;  // ||(I-U)E[f o T^n|M]||_q
  double bound = 0.0;            // (2^n local energy)^{1/q}
  double error = 0.0;
};

struct ProjectiveSeries {
  double q = 2.0;
  std::vector<SeriesRow> rows;
  double partial_sum = 0.0;
  double partial_sum_coboundary = 0.0;
  double tail_estimate = kInf;            // geometric extrapolation of the remaining terms
  double tail_estimate_coboundary = kInf;
  double bound_sum = 0.0;                 // sum of bound column
  std::optional<double> hoelder_bound;    // series bound from the weighted criterion integral
  CriteriaReport report;
};

/// Table of the two conditional-expectation norms for n <= N (N <= 20).
ProjectiveSeries projective_series_report(const FunctionOnUnitInterval& f, double q, int N, double delta);

enum class Target { kInvariance, kLil, kStrongLaw };
enum class RangeReading { kCorrected, kLiteral };
const char* to_string(Target t);

struct CorollaryInputs {
  Target target = Target::kInvariance;
  double p = 1.5;
  double r = 1.8;        // strong-law target only
  double delta = 0.1;
  int terms = 12;
  RangeReading reading = RangeReading::kCorrected;
};

/// Sufficient conditions on f for the chosen limit theorem: the two weighted
/// integral criteria and the two projective series, with integrability checks.
CriteriaReport corollary_report(const FunctionOnUnitInterval& f, const CorollaryInputs& in);

}  // namespace cobound::bern

#endif  // COBOUND_BERNOULLI_CRITERIA_HPP
