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
#include <set>

#include "cobound/rng.hpp"
#include "doctest.h"

using cobound::CounterRng;
using cobound::philox4x32_10;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using B = cobound::PhiloxBlock;
  CHECK(philox4x32_10(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("random access is a pure function of seed, stream and index") {
  const CounterRng a(42, 7), b(42, 7), other_stream(42, 8), other_seed(43, 7);
  for (std::uint64_t i : {0ull, 1ull, 1000ull, 1ull << 40}) {
    CHECK(a.u64(i) == b.u64(i));
    CHECK(a.u64(i) != other_stream.u64(i));
    CHECK(a.u64(i) != other_seed.u64(i));
  }
  cobound::CounterCursor cur(a, 5);
  CHECK(cur.next_u64() == a.u64(5));
  CHECK(cur.next_u64() == a.u64(6));
  CHECK(cur.position() == 7);
}

TEST_CASE("uniform draws lie in [0,1) and are distinct") {
  const CounterRng r(1, 0);
  std::set<double> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = r.uniform(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen.insert(u);
  }
  CHECK(seen.size() == 10000);
}

TEST_CASE("fair bits: mean of 10^6 draws within 0.5 +- 0.002") {
  const CounterRng r(2024, 3);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < 1000000; ++i) ones += r.bit(i);
  CHECK(std::abs(static_cast<double>(ones) / 1e6 - 0.5) <= 0.002);
}
