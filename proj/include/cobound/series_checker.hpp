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

#ifndef COBOUND_SERIES_CHECKER_HPP
#define COBOUND_SERIES_CHECKER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cobound/criteria.hpp"
#include "json.hpp"

namespace cobound::series {

/// Sequences are given through their natural logarithms so that terms whose
/// factors overflow a double (N_k grows like 2^{ck}) stay representable.
struct SequenceFamily {
  std::string name;
  double p = 1.5;
  std::int64_t k_start = 1;
  std::function<double(std::int64_t)> log_theta;  // increasing, -> infinity
  std::function<double(std::int64_t)> log_n;      // positive integers, non-decreasing
  std::function<double(std::int64_t)> log_rho;    // in (0, 1), decreasing
  std::function<double(std::int64_t)> log_rho_tail;  // optional closed form of log sum_{i>=k} rho_i
  std::function<double(std::int64_t)> log_eps;       // optional fourth sequence, off by default
  std::function<double(std::int64_t)> log_reference; // optional closed form of the summable increment

  /// theta_k = 2^{k(p-1)/p}/(log k)^{2/p}, N_k = ceil(2^{2k(2-p)/p}/k^{2/p}), rho_k = 2^{-k}, from k = 10.
  static SequenceFamily example(double p);
  /// Same family with theta multiplied by `factor`.
  SequenceFamily scaled_theta(double factor) const;
};

struct Checkpoint {
  std::int64_t k = 0;
  double sum_main = 0.0;       // sum theta^p N^{p/2} rho
  double sum_quadratic = 0.0;  // sum theta^2 sqrt(N) rho
  double tail_quantity = 0.0;  // theta_{k+1}^{p/(p-1)} sum_{i>=k} rho_i
  double sum_eps = 0.0;        // sum theta N eps^{1/p}, when the fourth sequence is given
};

struct SeriesVerdict {
  std::string verdict;         // "converges", "diverges", "tends to 0", "inconclusive"
  double statistic = 0.0;      // condensation slope, or slope against log log k
  double growth_rate = 0.0;    // geometric rate of condensed terms per doubling
  std::string rule;
};

struct Prop23Report {
  std::string family;
  double p = 0.0;
  std::int64_t k_max = 0;
  std::vector<Checkpoint> checkpoints;
  SeriesVerdict main;
  SeriesVerdict quadratic;
  SeriesVerdict tail;
  SeriesVerdict eps;
  double max_reference_ratio = 0.0;  // max over [1e3, K_max] of increment / reference, and 1/ratio
  double quadratic_growth = 0.0;     // S(K_max)/S(1e3) for the quadratic series
  double tail_ratio = 0.0;           // tail quantity at K_max over its value at 1e3
  CriteriaReport report;

  nlohmann::ordered_json to_json() const;
};

struct Prop23Options {
  double growth_threshold = 5.0;   // required S(K_max)/S(1e3) of the quadratic series
  double tail_drop = 0.1;          // required tail-quantity ratio between 1e3 and K_max
  double reference_factor = 2.0;   // allowed ratio to the reference increment
};

/// Sums over k_start <= k <= K_max with compensated accumulation; K_max >= 1000.
Prop23Report prop23_report(const SequenceFamily& family, std::int64_t k_max, const Prop23Options& options = {});

}  // namespace cobound::series

#endif  // COBOUND_SERIES_CHECKER_HPP
