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

#ifndef COBOUND_RNG_HPP
#define COBOUND_RNG_HPP

#include <array>
#include <cstdint>

namespace cobound {

// Philox4x32-10 (Salmon et al., SC'11). Stateless: every block is a pure
// function of (key, counter), so draws are addressed by (seed, stream, index)
// and any partition of the work reproduces the same numbers.

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline PhiloxBlock philox4x32_10(PhiloxBlock counter, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * counter[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * counter[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

/// Counter-based generator keyed by (seed, stream); block `index` is random access.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// 128 random bits for block `index`.
  PhiloxBlock block(std::uint64_t index) const noexcept {
    return philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  }

  /// Bit number `index` of the stream (bit `index % 128` of block `index / 128`).
  bool bit(std::uint64_t index) const noexcept {
    const PhiloxBlock b = block(index >> 7);
    const unsigned within = static_cast<unsigned>(index & 127u);
    return ((b[within >> 5] >> (within & 31u)) & 1u) != 0;
  }

  std::uint64_t u64(std::uint64_t index) const noexcept {
    const PhiloxBlock b = block(index);
    return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const noexcept {
    return static_cast<double>(u64(index) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Sequential view over a CounterRng stream, for code that wants "next()".
class CounterCursor {
 public:
  constexpr CounterCursor(CounterRng rng, std::uint64_t start = 0) noexcept
      : rng_(rng), next_(start) {}

  std::uint64_t next_u64() noexcept { return rng_.u64(next_++); }
  double next_uniform() noexcept { return rng_.uniform(next_++); }
  std::uint64_t position() const noexcept { return next_; }

 private:
  CounterRng rng_;
  std::uint64_t next_;
};

}  // namespace cobound

#endif  // COBOUND_RNG_HPP
