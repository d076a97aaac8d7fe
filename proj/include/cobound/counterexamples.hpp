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

#ifndef COBOUND_COUNTEREXAMPLES_HPP
#define COBOUND_COUNTEREXAMPLES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cobound/dynamics.hpp"
#include "cobound/rational.hpp"
#include "cobound/weak_tails.hpp"

namespace cobound::cex {

/// Which limit theorem the transfer function is built to break.
enum class Kind {
  kInvariancePrinciple,  // invariance principle and LIL; exponents (p, r)
  kStrongLaw,            // p-strong law; exponents (q, p, r)
};
const char* to_string(Kind kind);

struct Exponents {
  double q = 0.0;  // strong-law kind only
  double p = 0.0;
  double r = 0.0;
};

/// Open interval of admissible window exponents (alpha or beta), exact.
struct ParameterWindow {
  Rational lower;
  Rational upper;
  Rational width() const { return upper - lower; }
  bool contains(double x) const;
};

/// Window for alpha, (r-2)/(2(r-1)) < alpha < 1 - p/2. Throws if the exponent
/// ranges 1 <= p < 2 <= r are violated; the window may come back empty.
ParameterWindow ip_window(const Exponents& e);
/// Window for beta, (r-p)/(p(r-1)) < beta < 1 - q/p.
ParameterWindow slln_window(const Exponents& e);

struct WindowChoice {
  enum class Rule { kMidpoint, kExplicit };
  Rule rule = Rule::kMidpoint;
  double value = 0.0;  // used by kExplicit

  static WindowChoice midpoint() { return {}; }
  static WindowChoice exact(double v) { return {Rule::kExplicit, v}; }
};

/// One tower function g_i: amplitude * multiplier(level), where the level is
/// taken in the height-2^i tower over the zero cylinder. Levels n-j carry
/// multiplier j for 1 <= j <= k and 2k-j for k < j < 2k; all others are 0.
struct TowerTerm {
  int i = 0;
  std::uint64_t n = 0;  // 2^i
  std::uint64_t k = 0;  // ceil(2^{i * window exponent})
  double amplitude = 0.0;

  std::uint64_t multiplier(std::uint64_t level) const;
  double value(std::uint64_t level) const { return amplitude * static_cast<double>(multiplier(level)); }
  double peak() const { return amplitude * static_cast<double>(k); }
  std::uint64_t peak_level() const { return n - k; }

  /// (level, value) for the 2k-1 non-zero levels, ascending by level.
  std::vector<std::pair<std::uint64_t, double>> nonzero_levels() const;
  /// Distribution of g_i under the uniform measure, with exact measures.
  tails::SimpleFunctionRep distribution() const;
  /// Distribution of |g_i - g_i o T|, from level-by-level differences.
  tails::SimpleFunctionRep coboundary_distribution() const;
};

struct TowerCounterexample {
  Kind kind = Kind::kInvariancePrinciple;
  Exponents exponents;
  ParameterWindow window;
  double window_exponent = 0.0;  // alpha or beta
  int i0 = 0;
  int i_max = 0;
  int precision = 0;  // B
  std::vector<TowerTerm> terms;  // i0 .. i_max

  const TowerTerm& term(int i) const;
  /// Exponent of the norm that must be summable for g (p, or q for the strong-law kind).
  double transfer_exponent() const { return kind == Kind::kStrongLaw ? exponents.q : exponents.p; }
};

/// Smallest i with 2k_i < 2^i and 2^i > e^e.
int default_start_index(Kind kind, double window_exponent);

/// Validates exponents strictly, picks the window exponent and tabulates g_i
/// for i0 <= i <= i_max. Empty windows and i_max > B throw PreconditionError.
TowerCounterexample build_tower_counterexample(Kind kind, const Exponents& exponents,
                                               WindowChoice choice, std::optional<int> i0,
                                               int i_max, int precision);

struct GValue {
  double value = 0.0;
  /// P{some omitted tower i > i_max is non-zero} <= sum_{i > i_max} 2k_i / n_i.
  double truncation_risk = 0.0;
};

GValue eval_g(const TowerCounterexample& cex, const dynamics::OdometerPoint& point);
double truncation_risk(const TowerCounterexample& cex);
/// Bound on the chance that an omitted tower is non-zero anywhere along an
/// orbit of length n: sum_{i > i_max} (n + 2k_i) / n_i.
double orbit_truncation_risk(const TowerCounterexample& cex, std::int64_t n);

struct NormRow {
  int i = 0;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double amplitude = 0.0;
  double norm_transfer = 0.0;        // ||g_i||_p exactly (||g_i||_q for the strong-law kind)
  double norm_transfer_bound = 0.0;  // 2^{1/p} n^{1/2-1/p} (log log n)^{1/2} k^{1/p} or its analogue
  double norm_coboundary = 0.0;      // ||g_i - g_i o T||_r exactly
  double norm_coboundary_bound = 0.0;  // amplitude (2k/n)^{1/r}
  Rational coboundary_support;         // exact measure of {g_i != g_i o T}
  Rational coboundary_support_bound;   // 2k/n
  double decay_ratio = 0.0;      // norm_transfer(i) / norm_transfer(i-1); 0 for the first row
  double predicted_ratio = 0.0;  // 2^{(alpha-1+p/2)/p} times the log log drift
  double violation_probability = 0.0;
};

struct NormTable {
  std::vector<NormRow> rows;
  /// Columns i, n_i, k_i, a_i, norm_p_exact, bound_355, norm_r_exact, bound_358, violation_prob.
  std::string to_csv() const;
};

/// Exact per-tower norms with their closed-form bounds. The violation column is
/// the invariance-principle event at threshold epsilon sqrt(n_i) over one
/// tower period, or the strong-law event over [2^i, 2^{i+1}].
NormTable exact_norms(const TowerCounterexample& cex, double epsilon = 0.1);

/// Limit of the decay ratio of successive ||g_i||, 2^{(alpha - 1 + p/2)/p}
/// (strong-law kind: 2^{beta/q + 1/p - 1/q}).
double asymptotic_decay_ratio(const TowerCounterexample& cex);

enum class Comparison { kGreaterEqual, kGreater };

/// Exact measure of {w : max_{lo <= l <= hi} multiplier_i(level(T^l w, i)) cmp m},
/// counted over residues mod n_i. `m` is the threshold divided by the amplitude.
Rational exact_violation_probability(const TowerCounterexample& cex, int i, std::int64_t lo,
                                     std::int64_t hi, double multiplier_threshold,
                                     Comparison cmp = Comparison::kGreaterEqual);

/// Same event with a threshold on the value scale.
Rational exact_violation_probability_at(const TowerCounterexample& cex, int i, std::int64_t lo,
                                        std::int64_t hi, double threshold,
                                        Comparison cmp = Comparison::kGreater);

/// Strong-law event: 2^{-i/p} max_{l in window} g_i o T^l >= 1.
Rational slln_event_probability(const TowerCounterexample& cex, int i, std::int64_t lo,
                                std::int64_t hi);
/// Invariance-principle event over one tower period: max_{1<=k<=n_i} g_i o T^k > eps sqrt(n_i).
Rational ip_event_probability(const TowerCounterexample& cex, int i, double epsilon);

/// Certified lower bound for mu{max_{1<=k<=n} g o T^k > threshold}: the best single tower.
struct TowerBound {
  Rational probability;
  int tower = 0;  // 0 when no tower reaches the threshold
};
TowerBound orbit_max_lower_bound(const TowerCounterexample& cex, std::int64_t lo, std::int64_t hi,
                                 double threshold);

/// S_k(g - g o T) = g - g o T^k for k <= n, computed without summing the orbit.
/// Requires n <= 2^B.
dynamics::PathSummary telescoped_partial_sums(const TowerCounterexample& cex,
                                              const dynamics::OdometerPoint& point, std::int64_t n,
                                              std::span<const double> t_grid = {});

}  // namespace cobound::cex

#endif  // COBOUND_COUNTEREXAMPLES_HPP
