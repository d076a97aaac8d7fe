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

#include <stdexcept>

#include "cobound/rational.hpp"
#include "doctest.h"

using cobound::Rational;

TEST_CASE("normalization and arithmetic") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
  CHECK((Rational(1, 2) - Rational(1, 2)).sign() == 0);
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 3) > Rational(-1, 2));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("parsing and shortest-decimal conversion") {
  CHECK(Rational::parse("7/8") == Rational(7, 8));
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("2.5e-1") == Rational(1, 4));
  CHECK(Rational::from_double_shortest(1.2) == Rational(6, 5));
  CHECK(Rational::from_double_shortest(0.3667) == Rational(3667, 10000));
  CHECK(Rational::dyadic(3, 4) == Rational(3, 16));
  CHECK(Rational(6, 5).str() == "6/5");
  CHECK(Rational(3).str() == "3");
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("overflow is reported, not rounded") {
  const Rational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}
