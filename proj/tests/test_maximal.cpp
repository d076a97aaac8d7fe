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

#include <algorithm>
#include <cmath>
#include <vector>

#include "cobound/error.hpp"
#include "cobound/maximal.hpp"
#include "cobound/rng.hpp"
#include "doctest.h"

using namespace cobound;
using namespace cobound::maximal;
using dynamics::OdometerPoint;

namespace {

// Whether M*_{N_max} >= t at tower level l, from cyclic sums of the level values.
// Values and t are small dyadics, so s >= t n is exact in double.
bool reaches(const LevelFunction& h, std::size_t l, std::int64_t n_max, double t) {
  const std::size_t period = h.values.size();
  double s = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    s += h.values[(l + static_cast<std::size_t>(n - 1)) % period];
    if (std::abs(s) >= t * static_cast<double>(n)) return true;
  }
  return false;
}

LevelFunction random_level(std::uint64_t seed, int i) {
  LevelFunction h;
  h.i = i;
  const CounterRng rng(seed, 0);
  for (std::size_t j = 0; j < (std::size_t{1} << i); ++j) h.values.push_back(static_cast<double>(rng.u64(j) >> 60) / 4.0);
  return h;
}

}  // namespace

TEST_CASE("truncated maximal function of trivial and telescoping summands") {
  const OdometerPoint w(37, 10);
  const dynamics::OdometerFunction c = [](const OdometerPoint&) { return 2.5; };
  CHECK(truncated_mstar(c, w, 64) == doctest::Approx(2.5));
  const dynamics::OrbitEvaluator zero = [](std::int64_t) { return 0.0; };
  CHECK(truncated_mstar(zero, 64) == 0.0);

  const dynamics::OrbitEvaluator g = [](std::int64_t k) { return std::cos(0.3 * static_cast<double>(k)) * 3.0; };
  const dynamics::OrbitEvaluator f = [&](std::int64_t k) { return g(k) - g(k + 1); };
  double expect = 0.0;
  for (std::int64_t n = 1; n <= 200; ++n) expect = std::max(expect, std::abs(g(0) - g(n)) / static_cast<double>(n));
  CHECK(truncated_mstar(f, 200) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zero function gives zero on both sides") {
  const auto grid = dyadic_threshold_grid(1.0, 8);
  const MaximalReport r = maximal_inequality_report(LevelFunction::constant(3, 0.0), 8, 64, grid, 2.0);
  for (const ThresholdRow& row : r.rows) {
    CHECK(row.measure == Rational(0));
    CHECK(row.expectation == 0.0);
    CHECK(row.holds_maximal);
    CHECK(row.holds_weak);
  }
}

TEST_CASE("indicator of the base cylinder A_5, B = 12") {
  const LevelFunction h = LevelFunction::indicator_of_zero_cylinder(5, 5);
  const MaximalReport r = maximal_inequality_report(h, 12, 1024, dyadic_threshold_grid(1.0, 32), 2.0);
  CHECK(r.violations_maximal() == 0);
  CHECK(r.violations_weak() == 0);
  CHECK(r.violations_weak_global() == 0);
  for (const ThresholdRow& row : r.rows) CHECK(row.slack_maximal >= 0.0);
}

TEST_CASE("enumerated measures match the residue oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const LevelFunction h = random_level(seed, 6);
    const double top = *std::max_element(h.values.begin(), h.values.end());
    const auto grid = dyadic_threshold_grid(top, 16);
    const MaximalReport r = maximal_inequality_report(h, 10, 100, grid, 2.0, 3);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::int64_t count = 0;
      double mass = 0.0;
      for (std::size_t l = 0; l < h.values.size(); ++l) {
        if (reaches(h, l, 100, grid[j])) {
          ++count;
          mass += h.values[l];
        }
      }
      CHECK(r.rows[j].measure == Rational::dyadic(count, 6));
      CHECK(r.rows[j].expectation == doctest::Approx(mass / 64.0));
    }
  }
}

TEST_CASE("measure of {M* >= t} is non-decreasing in N_max; workers do not change results") {
  const LevelFunction h = random_level(11, 7);
  const auto grid = dyadic_threshold_grid(3.0, 12);
  std::vector<Rational> prev(grid.size(), Rational(0));
  for (std::int64_t n : {1, 4, 16, 64, 256}) {
    const MaximalReport r = maximal_inequality_report(h, 10, n, grid, 2.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CHECK(r.rows[j].measure >= prev[j]);
      prev[j] = r.rows[j].measure;
    }
  }
  const auto a = maximal_inequality_report(h, 10, 64, grid, 2.0, 1).to_json().dump();
  const auto b = maximal_inequality_report(h, 10, 64, grid, 2.0, 4).to_json().dump();
  CHECK(a == b);
}

TEST_CASE("guards") {
  const auto grid = dyadic_threshold_grid(1.0, 4);
  CHECK_THROWS_AS(maximal_inequality_report(LevelFunction::constant(3, 1.0), 21, 16, grid, 2.0), ResourceLimitError);
  CHECK_THROWS_AS(maximal_inequality_report(LevelFunction::constant(3, -1.0), 8, 16, grid, 2.0), PreconditionError);
  const std::vector<double> bad{0.1};
  CHECK_THROWS_AS(maximal_inequality_report(LevelFunction::constant(3, 1.0), 8, 16, bad, 2.0), PreconditionError);
}
