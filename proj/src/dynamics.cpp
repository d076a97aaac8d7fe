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

#include "cobound/dynamics.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "cobound/error.hpp"
#include "cobound/rng.hpp"

namespace cobound::dynamics {

namespace {

constexpr std::uint64_t kSignedOffset = std::uint64_t{1} << 63;

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

OdometerPoint::OdometerPoint(std::uint64_t value, int precision)
    : value_(value), precision_(precision) {
  require(precision >= 1 && precision <= kMaxPrecision,
          "odometer precision must lie in [1, 62], got " + std::to_string(precision));
  require(value < modulus(), "odometer value " + std::to_string(value) +
                                 " does not fit in " + std::to_string(precision) + " digits");
}

OdometerPoint OdometerPoint::from_bits(std::span<const std::uint8_t> bits_lsb_first) {
  const auto precision = static_cast<int>(bits_lsb_first.size());
  require(precision >= 1 && precision <= kMaxPrecision, "odometer precision must lie in [1, 62]");
  std::uint64_t v = 0;
  for (int b = 0; b < precision; ++b) {
    const auto digit = bits_lsb_first[static_cast<std::size_t>(b)];
    require(digit <= 1, "odometer digits must be 0 or 1");
    v |= static_cast<std::uint64_t>(digit) << b;
  }
  return {v, precision};
}

bool OdometerPoint::bit(int b) const {
  require(b >= 0 && b < precision_, "digit index out of range");
  return ((value_ >> b) & 1u) != 0;
}

std::vector<std::uint8_t> OdometerPoint::bits() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(precision_));
  for (int b = 0; b < precision_; ++b) out[static_cast<std::size_t>(b)] = (value_ >> b) & 1u;
  return out;
}

OdometerPoint odometer_advance(const OdometerPoint& point, std::int64_t steps) {
  // Two's complement wrap-around is exactly arithmetic mod 2^64, and 2^B divides 2^64.
  const std::uint64_t shifted = point.value() + static_cast<std::uint64_t>(steps);
  return {shifted & low_mask(point.precision()), point.precision()};
}

std::uint64_t level(const OdometerPoint& point, int i) {
  require(i >= 1 && i <= point.precision(),
          "tower index " + std::to_string(i) + " outside [1, " +
              std::to_string(point.precision()) + "]");
  return point.value() & low_mask(i);
}

ShiftTrajectory::ShiftTrajectory(std::uint64_t seed, std::int64_t horizon, int window,
                                 std::uint64_t stream)
    : seed_(seed), stream_(stream), horizon_(horizon), window_(window) {
  require(horizon >= 1, "shift trajectory horizon must be >= 1");
  require(window >= 1 && window <= 63, "shift trajectory window must lie in [1, 63]");
  const CounterRng rng(seed, stream);
  const auto count = static_cast<std::uint64_t>(horizon + 2 * static_cast<std::int64_t>(window) + 1);
  packed_.assign((count + 63) / 64, 0);
  // Fill whole 128-bit Philox blocks at a time; bit k lives at global index k + 2^63.
  const std::uint64_t first_global = static_cast<std::uint64_t>(-static_cast<std::int64_t>(window)) + kSignedOffset;
  std::uint64_t cached_block = ~std::uint64_t{0};
  PhiloxBlock block{};
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const std::uint64_t global = first_global + idx;
    const std::uint64_t block_index = global >> 7;
    if (block_index != cached_block) {
      block = rng.block(block_index);
      cached_block = block_index;
    }
    const unsigned within = static_cast<unsigned>(global & 127u);
    if ((block[within >> 5] >> (within & 31u)) & 1u) packed_[idx >> 6] |= std::uint64_t{1} << (idx & 63u);
  }

  const auto n_coords = static_cast<std::size_t>(horizon + window + 1);
  coords_.resize(n_coords);
  std::uint64_t c = 0;
  for (int j = 1; j <= window; ++j) {
    if (epsilon(-j)) c |= std::uint64_t{1} << (window - j);
  }
  coords_[0] = c;
  for (std::size_t k = 1; k < n_coords; ++k) {
    const bool newest = epsilon(static_cast<std::int64_t>(k) - 1);
    c = (c >> 1) | (static_cast<std::uint64_t>(newest) << (window - 1));
    coords_[k] = c;
  }
}

bool ShiftTrajectory::epsilon(std::int64_t k) const {
  require(k >= first_index() && k <= last_index(), "shift index outside the stored window");
  const auto idx = static_cast<std::uint64_t>(k + window_);
  return ((packed_[idx >> 6] >> (idx & 63u)) & 1u) != 0;
}

std::uint64_t ShiftTrajectory::coordinate_bits(std::int64_t k) const {
  require(k >= 0 && k <= horizon_ + window_, "coordinate index outside [0, n+W]");
  return coords_[static_cast<std::size_t>(k)];
}

double ShiftTrajectory::coordinate(std::int64_t k) const {
  return std::ldexp(static_cast<double>(coordinate_bits(k)), -window_ - 1);
}

double ShiftTrajectory::unit_coordinate(std::int64_t k) const {
  return std::ldexp(static_cast<double>(coordinate_bits(k)), -window_);
}

ShiftTrajectory shift_trajectory(std::uint64_t seed, std::int64_t n, int window,
                                 std::uint64_t stream) {
  return ShiftTrajectory(seed, n, window, stream);
}

OrbitEvaluator odometer_orbit(OdometerFunction f, OdometerPoint base) {
  return [f = std::move(f), base](std::int64_t k) { return f(odometer_advance(base, k)); };
}

OrbitEvaluator shift_orbit(ShiftObservable f, const ShiftTrajectory& trajectory) {
  return [f = std::move(f), &trajectory](std::int64_t k) { return f(trajectory, k); };
}

double PathSummary::summand(std::int64_t k) const {
  require(k >= 0 && k < horizon, "summand index outside [0, n)");
  const auto i = static_cast<std::size_t>(k);
  return partial_sums[i + 1] - partial_sums[i];
}

double PathSummary::polygonal_at(double t) const {
  require(t >= 0.0 && t <= 1.0, "polygonal path is defined on [0, 1]");
  const double nt = static_cast<double>(horizon) * t;
  const double nearest = std::round(nt);
  // Snap to the knot when nt is a rounding error away from an integer.
  if (std::abs(nt - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, nt)) {
    return partial_sums[static_cast<std::size_t>(nearest)];
  }
  const auto whole = static_cast<std::int64_t>(std::floor(nt));
  const double frac = nt - static_cast<double>(whole);
  return partial_sums[static_cast<std::size_t>(whole)] + frac * summand(whole);
}

PathSummary birkhoff(const OrbitEvaluator& summand, std::int64_t n,
                     std::span<const double> t_grid, const OrbitEvaluator* transfer) {
  require(n >= 1, "birkhoff horizon must be >= 1");
  for (std::size_t m = 0; m < t_grid.size(); ++m) {
    require(t_grid[m] >= 0.0 && t_grid[m] <= 1.0, "t-grid values must lie in [0, 1]");
  }
  PathSummary out;
  out.horizon = n;
  const auto len = static_cast<std::size_t>(n) + 1;
  out.partial_sums.resize(len);
  out.running_max_abs_sum.resize(len);
  out.partial_sums[0] = 0.0;
  out.running_max_abs_sum[0] = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    double value = 0.0;
    try {
      value = summand(k);
    } catch (const EvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(k, e.what());
    }
    const auto i = static_cast<std::size_t>(k);
    out.partial_sums[i + 1] = out.partial_sums[i] + value;
    out.running_max_abs_sum[i + 1] =
        std::max(out.running_max_abs_sum[i], std::abs(out.partial_sums[i + 1]));
  }
  if (transfer != nullptr) {
    out.running_max_abs_transfer.resize(len);
    out.running_max_abs_transfer[0] = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
      double value = 0.0;
      try {
        value = (*transfer)(k);
      } catch (const EvaluationError&) {
        throw;
      } catch (const std::exception& e) {
        throw EvaluationError(k, e.what());
      }
      const auto i = static_cast<std::size_t>(k);
      out.running_max_abs_transfer[i] = std::max(out.running_max_abs_transfer[i - 1], std::abs(value));
    }
  }
  out.grid.assign(t_grid.begin(), t_grid.end());
  out.polygonal.reserve(out.grid.size());
  for (double t : out.grid) out.polygonal.push_back(out.polygonal_at(t));
  return out;
}

std::vector<double> uniform_t_grid(int m) {
  require(m >= 1, "t-grid needs at least one interval");
  std::vector<double> grid(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / m;
  return grid;
}

}  // namespace cobound::dynamics
