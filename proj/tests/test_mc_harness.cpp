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

#include <cmath>
#include <vector>

#include "cobound/error.hpp"
#include "cobound/mc_harness.hpp"
#include "doctest.h"

using namespace cobound;
using namespace cobound::mc;

namespace {

ExperimentConfig tower_config(int i0, int i_max, std::int64_t paths) {
  ExperimentConfig c;
  c.system = System::kOdometer;
  c.precision = 24;
  c.transfer.kind = TransferKind::kTower;
  c.transfer.tower = cex::build_tower_counterexample(cex::Kind::kInvariancePrinciple, {0.0, 1.2, 4.0},
                                                     cex::WindowChoice::exact(0.3667), i0, i_max, 24);
  c.horizons = {256, 1024};
  c.paths = paths;
  c.seed = 5;
  return c;
}

ExperimentConfig shift_config() {
  ExperimentConfig c;
  c.system = System::kShift;
  c.martingale = MartingaleKind::kRademacher;
  c.transfer.kind = TransferKind::kCosine;
  c.horizons = {64, 256, 1024};
  c.paths = 400;
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig c = shift_config();
  CHECK_NOTHROW(c.validate());
  c.paths = 99;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = tower_config(4, 12, 100);
  c.horizons = {1 << 24};
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = shift_config();
  c.transfer = tower_config(4, 12, 100).transfer;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = shift_config();
  c.horizons = {10, 5};
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("sampled paths telescope") {
  const ExperimentConfig c = shift_config();
  const PathData d = sample_path(c, 3, 500);
  double sum_f = 0.0, sum_m = 0.0;
  for (std::size_t k = 0; k < 500; ++k) {
    sum_f += d.f(k);
    sum_m += d.m[k];
    CHECK((d.m[k] == 1.0 || d.m[k] == -1.0));
  }
  CHECK(std::abs(sum_f - sum_m - (d.g[0] - d.g[500])) <= 1e-10);
  CHECK(sample_path(c, 3, 500).g == d.g);
}

TEST_CASE("bounded transfer function: estimate is exactly 0 once eps sqrt(n) exceeds the sup") {
  ExperimentConfig c = shift_config();
  c.martingale = MartingaleKind::kNone;
  c.epsilons = {1.0};
  const ConditionReport r = condition16_report(c);
  for (const EstimateRow& row : r.rows) {
    CHECK(row.estimate == 0.0);
    REQUIRE(row.exact.has_value());
    CHECK(*row.exact == 0.0);
  }
  CHECK(r.verdict(1.0) == Verdict::kHolds);
}

TEST_CASE("zero transfer function: block sups vanish") {
  ExperimentConfig c = shift_config();
  c.transfer.kind = TransferKind::kNone;
  c.martingale = MartingaleKind::kNone;
  const ConditionReport r = condition17_report(c);
  for (double s : r.path_sups) CHECK(s == 0.0);
  for (const EstimateRow& row : r.rows) CHECK(row.estimate == 0.0);
}

TEST_CASE("single tower: Monte Carlo matches the exact probability") {
  ExperimentConfig c = tower_config(10, 10, 4000);
  c.epsilons = {0.1, 0.5, 1.0};
  const ConditionReport r = condition16_report(c);
  bool some_nontrivial = false;
  for (const EstimateRow& row : r.rows) {
    REQUIRE(row.exact.has_value());
    CHECK_FALSE(row.exact_is_lower_bound);
    CHECK(row.oracle_agrees);
    some_nontrivial = some_nontrivial || (*row.exact > 0.0 && *row.exact < 1.0);
  }
  CHECK(some_nontrivial);
}

TEST_CASE("results do not depend on the worker count") {
  ExperimentConfig c = tower_config(4, 14, 300);
  c.workers = 1;
  const std::string a = condition16_report(c).to_json().dump() + condition17_report(c).to_json().dump();
  c.workers = 4;
  const std::string b = condition16_report(c).to_json().dump() + condition17_report(c).to_json().dump();
  CHECK(a == b);
  ExperimentConfig s = shift_config();
  s.workers = 1;
  const std::string x = clt_lil_report(s).to_json().dump();
  s.workers = 3;
  CHECK(x == clt_lil_report(s).to_json().dump());
}

TEST_CASE("CLT report: telescoping bound and Rademacher sigma") {
  const ExperimentConfig c = shift_config();
  const CltReport r = clt_lil_report(c);
  CHECK(r.sigma_known);
  CHECK(r.sigma == 1.0);
  CHECK(r.max_telescoping_excess <= 1e-9);
  CHECK(r.max_perturbation <= 2.0 / std::sqrt(1024.0) + 1e-12);
  CHECK(r.ks_distance < 0.1);
  ExperimentConfig z = c;
  z.martingale = MartingaleKind::kNone;
  z.transfer.kind = TransferKind::kNone;
  CHECK_THROWS(clt_lil_report(z));
}

TEST_CASE("KS distance to the standard normal") {
  CHECK(ks_distance_to_normal({0.0}) == doctest::Approx(0.5));
  std::vector<double> q;
  for (int j = 1; j < 1000; ++j) {
    // normal quantiles by bisection on erfc
    const double u = j / 1000.0;
    double lo = -10, hi = 10;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < u ? lo : hi) = mid;
    }
    q.push_back(lo);
  }
  CHECK(ks_distance_to_normal(q) <= 1.0 / 1000.0 + 1e-9);
}

TEST_CASE("strong-law series for i.i.d. Rademacher terms") {
  ExperimentConfig c;
  c.system = System::kShift;
  c.martingale = MartingaleKind::kRademacher;
  c.horizons = {10, 100, 1000, 10000};
  c.paths = 400;
  c.seed = 3;
  c.p = 1.5;
  c.alpha = 1.0;
  c.epsilons = {0.5};
  const ConditionReport r = slln_report(c);
  CHECK(r.verdict(0.5) == Verdict::kHolds);
}

TEST_CASE("hypothesis margins are exact") {
  const auto lil = validate_hypotheses({Rational(1), Rational(8, 5), Rational(3)}, Hypothesis::kLilStrict);
  CHECK(lil.all_hold());
  CHECK(*lil.at("p > r/(r-1)").exact_margin == Rational(1, 10));
  const auto boundary = validate_hypotheses({Rational(1), Rational(3, 2), Rational(3)}, Hypothesis::kLilBoundary);
  CHECK(boundary.at("p = r/(r-1)").verdict == "boundary");
  CHECK(*boundary.at("p = r/(r-1)").exact_margin == Rational(0));
  const auto strict_at_boundary =
      validate_hypotheses({Rational(1), Rational(3, 2), Rational(3)}, Hypothesis::kLilStrict);
  CHECK_FALSE(strict_at_boundary.all_hold());
  const auto sl = validate_hypotheses({Rational(6, 5), Rational(3, 2), Rational(9, 5)}, Hypothesis::kStrongLaw);
  CHECK(sl.all_hold());
  CHECK(*sl.at("q >= (p-1)r/(r-1)").exact_margin == Rational(3, 40));
  const auto ce = validate_hypotheses({Rational(1), Rational(6, 5), Rational(4)}, Hypothesis::kInvarianceCounterexample);
  CHECK(ce.all_hold());
  CHECK(ce.extra["alpha_window"][0] == "1/3");
  CHECK(ce.extra["alpha_window"][1] == "2/5");
}

TEST_CASE("hypothesis names round-trip") {
  for (Hypothesis h : {Hypothesis::kWeakInvariance, Hypothesis::kLilStrict, Hypothesis::kLilBoundary,
                       Hypothesis::kStrongLaw, Hypothesis::kInvarianceCounterexample,
                       Hypothesis::kStrongLawCounterexample}) {
    CHECK(parse_hypothesis(to_string(h)) == h);
  }
  CHECK_THROWS_AS(parse_hypothesis("nope"), PreconditionError);
}
