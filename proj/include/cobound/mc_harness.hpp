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

#ifndef COBOUND_MC_HARNESS_HPP
#define COBOUND_MC_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cobound/counterexamples.hpp"
#include "cobound/criteria.hpp"
#include "cobound/rational.hpp"
#include "json.hpp"

namespace cobound::mc {

enum class System { kOdometer, kShift };
enum class MartingaleKind { kNone, kRademacher };
/// Closed forms are functions of the unit coordinate u_k of the shift.
enum class TransferKind { kNone, kTower, kCosine, kIdentity, kPower };

const char* to_string(System s);
const char* to_string(MartingaleKind m);
const char* to_string(TransferKind t);

struct TransferSpec {
  TransferKind kind = TransferKind::kNone;
  double amplitude = 1.0;  // cosine: a cos(2 pi u); identity: a u; power: a u^-power
  double power = 0.4;
  std::optional<cex::TowerCounterexample> tower;

  double sup_norm() const;  // +inf when unbounded
};

struct ExperimentConfig {
  System system = System::kShift;
  int precision = 24;   // odometer digits B
  int window = 53;      // shift coordinate bits W
  MartingaleKind martingale = MartingaleKind::kNone;
  TransferSpec transfer;
  std::vector<std::int64_t> horizons;
  std::int64_t paths = 1000;
  std::uint64_t seed = 0;
  std::vector<double> epsilons{0.1, 0.5, 1.0};
  double p = 1.5;
  std::optional<double> alpha;
  unsigned workers = 1;

  /// Throws PreconditionError naming the violated invariant.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

/// Orbit data of one path: martingale part m o T^k for k < n and transfer g o T^k for k <= n.
struct PathData {
  std::vector<double> m;
  std::vector<double> g;
  double f(std::size_t k) const { return (m.empty() ? 0.0 : m[k]) + g[k] - g[k + 1]; }
};

/// Path `path` of the experiment: odometer start and shift bits keyed by (seed, path).
PathData sample_path(const ExperimentConfig& config, std::uint64_t path, std::int64_t n);

enum class Verdict { kHolds, kFails, kInconclusive };
const char* to_string(Verdict v);

struct EstimateRow {
  std::string block;      // horizon label or block label
  std::int64_t n = 0;     // horizon, or block start
  std::int64_t length = 0;
  double epsilon = 0.0;
  double threshold = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t paths = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double weight = 0.0;          // series weight attached to the row, 0 if none
  double partial_sum = 0.0;     // running series value through this row
  std::optional<double> exact;  // exact probability or exact lower bound of the same event
  bool exact_is_lower_bound = false;
  bool oracle_agrees = true;    // within 3 binomial sigma of the exact value
};

struct ConditionReport {
  std::string condition;
  std::string decision_rule;
  nlohmann::ordered_json config;
  std::vector<EstimateRow> rows;
  std::vector<std::pair<double, Verdict>> verdicts;  // per epsilon
  std::vector<double> path_sups;                     // per path, when the condition has one
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  Verdict verdict(double epsilon) const;
  bool oracle_agrees() const;
  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

/// Named hypotheses of the limit theorems, checked in exact arithmetic.
enum class Hypothesis {
  kWeakInvariance,           // g in L_0^{p,inf}, g - g o T in L_0^{p/(p-1),inf}
  kLilStrict,                // p > r/(r-1)
  kLilBoundary,              // p = r/(r-1)
  kStrongLaw,                // q >= (p-1) r/(r-1)
  kInvarianceCounterexample, // p < r/(r-1)
  kStrongLawCounterexample,  // q < (p-1) r/(r-1)
};
const char* to_string(Hypothesis h);
Hypothesis parse_hypothesis(const std::string& name);

struct RationalExponents {
  Rational q{1};
  Rational p{3, 2};
  Rational r{2};
};

CriteriaReport validate_hypotheses(const RationalExponents& e, Hypothesis which);

ConditionReport condition16_report(const ExperimentConfig& config);
ConditionReport condition17_report(const ExperimentConfig& config);
ConditionReport slln_report(const ExperimentConfig& config);

struct CltReport {
  nlohmann::ordered_json config;
  std::int64_t n = 0;
  std::uint64_t paths = 0;
  double sigma = 1.0;
  bool sigma_known = true;
  double ks_distance = 0.0;
  std::vector<std::pair<double, double>> sup_quantiles;  // (level, quantile) of sup_t |S^pl|/(sigma sqrt n)
  std::vector<std::pair<double, double>> lil_quantiles;  // of per-path max S_k / sqrt(2 sigma^2 k log log k)
  double lil_mean = 0.0;
  // Paired run with the transfer part removed, same seeds.
  std::optional<double> baseline_ks_distance;
  double max_perturbation = 0.0;        // max over paths |S_n(f) - S_n(m)| / sqrt(n)
  double max_telescoping_excess = 0.0;  // max over paths |S_n(f) - S_n(m)| - (|g_0| + |g_n|)
  std::vector<double> scaled_sums;      // S_n / (sigma sqrt n) per path, in path order

  nlohmann::ordered_json to_json() const;
};

/// Throws PreconditionError when the variance estimate is below 1e-9.
CltReport clt_lil_report(const ExperimentConfig& config);

double ks_distance_to_normal(std::vector<double> samples);

}  // namespace cobound::mc

#endif  // COBOUND_MC_HARNESS_HPP
