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

#include "cobound/counterexamples.hpp"
#include "cobound/rng.hpp"
#include "cobound/weak_tails.hpp"
#include "doctest.h"

using namespace cobound;
using namespace cobound::tails;

namespace {

SimpleFunctionRep indicator(double c, Rational a) { return SimpleFunctionRep::from_atoms({{c, a}}); }

cex::TowerCounterexample ip_example() {
  return cex::build_tower_counterexample(cex::Kind::kInvariancePrinciple, {0.0, 1.2, 4.0},
                                         cex::WindowChoice::exact(0.3667), 4, 22, 24);
}

}  // namespace

TEST_CASE("tails of a scaled indicator") {
  const std::vector<double> grid{1, 2, 3, 4};
  const TailProfile t = tail_profile(indicator(3.0, Rational(1, 8)), grid);
  CHECK(t.exact_tails == std::vector<Rational>{Rational(1, 8), Rational(1, 8), Rational(0), Rational(0)});
  CHECK(t.exact_left_tails[2] == Rational(1, 8));
  const TailProfile z = tail_profile(SimpleFunctionRep{}, grid);
  for (double v : z.tails) CHECK(v == 0.0);
}

TEST_CASE("weak and strong norms of indicators") {
  const SimpleFunctionRep h = indicator(3.0, Rational(1, 8));
  for (double q : {1.0, 1.5, 2.0}) {
    const TailProfile t = tail_profile(h, h.jump_points(), q);
    CHECK(weak_norm(t, q).value == doctest::Approx(std::pow(3.0, q) / 8.0));
  }
  const TailProfile z = tail_profile(SimpleFunctionRep{}, std::vector<double>{1.0}, 2.0);
  CHECK(weak_norm(z, 2.0).value == 0.0);
  CHECK(weak_norm(z, 2.0).tail_indicator == 0.0);
  CHECK(strong_norm(indicator(1.0, Rational(1, 4)), 2.0) == doctest::Approx(0.5));
}

TEST_CASE("tower term g_10: exact level count and the Chebyshev bridge") {
  const auto c = ip_example();
  const auto& t = c.term(10);
  const SimpleFunctionRep dist = t.distribution();
  std::int64_t above = 0;
  for (std::uint64_t lvl = 0; lvl < t.n; ++lvl) above += t.value(lvl) > 1.0;
  const TailProfile prof = tail_profile(dist, std::vector<double>{1.0}, 1.2);
  CHECK(prof.exact_tails[0] == Rational::dyadic(above, 10));

  for (int i = c.i0; i <= c.i_max; ++i) {
    const SimpleFunctionRep d = c.term(i).distribution();
    for (double q : {1.0, 1.2, 2.0}) {
      const double w = weak_norm(tail_profile(d, d.jump_points(), q), q).value;
      CHECK(w <= std::pow(strong_norm(d, q), q) * (1 + 1e-12));
    }
  }
}

TEST_CASE("tail profiles are non-increasing and weak norm is monotone under scaling") {
  const auto d = ip_example().term(12).distribution();
  const auto grid = d.jump_points();
  const TailProfile t = tail_profile(d, grid, 1.5);
  for (std::size_t j = 1; j < t.tails.size(); ++j) CHECK(t.tails[j] <= t.tails[j - 1]);
  std::vector<Atom> bigger;
  for (const Atom& a : d.atoms()) bigger.push_back({a.value * 1.5, a.measure});
  const SimpleFunctionRep b = SimpleFunctionRep::from_atoms(bigger);
  CHECK(weak_norm(tail_profile(b, b.jump_points(), 1.5), 1.5).value >= weak_norm(t, 1.5).value);
}

TEST_CASE("empirical tails agree with exact tails within 3 binomial sigma") {
  const SimpleFunctionRep h = SimpleFunctionRep::from_atoms(
      {{0.5, Rational(1, 4)}, {1.5, Rational(1, 8)}, {4.0, Rational(1, 16)}});
  const std::size_t n = 100000;
  const auto samples = draw_samples(h, CounterRng(77, 0), n);
  const std::vector<double> grid{0.25, 1.0, 2.0, 3.0};
  const TailProfile exact = tail_profile(h, grid);
  const TailProfile emp = tail_profile(samples, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double p = exact.tails[j];
    CHECK(std::abs(emp.tails[j] - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
  }
}
