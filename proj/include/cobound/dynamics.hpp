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

#ifndef COBOUND_DYNAMICS_HPP
#define COBOUND_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cobound::dynamics {

/// A point of the binary odometer truncated to B digits.
///
/// Digits are stored least-significant first; the point is identified with
/// value() = sum_b bit_b 2^b in [0, 2^B). The odometer map adds one with carry,
/// so on the truncated space it is x -> x + 1 mod 2^B.
class OdometerPoint {
 public:
  static constexpr int kMaxPrecision = 62;

  OdometerPoint(std::uint64_t value, int precision);
  static OdometerPoint from_bits(std::span<const std::uint8_t> bits_lsb_first);

  std::uint64_t value() const noexcept { return value_; }
  int precision() const noexcept { return precision_; }
  std::uint64_t modulus() const noexcept { return std::uint64_t{1} << precision_; }

  /// Digit b, 0-based from the least significant end.
  bool bit(int b) const;
  std::vector<std::uint8_t> bits() const;

  friend bool operator==(const OdometerPoint&, const OdometerPoint&) = default;

 private:
  std::uint64_t value_;
  int precision_;
};

/// T^steps; negative steps apply the inverse map.
OdometerPoint odometer_advance(const OdometerPoint& point, std::int64_t steps);

/// Index of the tower level T^l A_i containing the point, where A_i is the
/// cylinder whose first i digits vanish. Requires 1 <= i <= B.
std::uint64_t level(const OdometerPoint& point, int i);

/// Fair-coin bits eps_k on the window [-W, n+W] of the two-sided Bernoulli shift.
///
/// Bit k is bit (k + 2^63) of the Philox stream keyed by (seed, stream), so the
/// same seed reproduces the same bits for any horizon or window.
class ShiftTrajectory {
 public:
  static constexpr int kDefaultWindow = 53;

  ShiftTrajectory(std::uint64_t seed, std::int64_t horizon, int window = kDefaultWindow,
                  std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::int64_t horizon() const noexcept { return horizon_; }
  int window() const noexcept { return window_; }

  std::int64_t first_index() const noexcept { return -window_; }
  std::int64_t last_index() const noexcept { return horizon_ + window_; }

  /// eps_k for k in [-W, n+W].
  bool epsilon(std::int64_t k) const;

  /// W-bit integer sum_{j=1}^{W} eps_{k-j} 2^{W-j}; valid for 0 <= k <= n+W.
  std::uint64_t coordinate_bits(std::int64_t k) const;
  /// x_k = sum_{j=1}^{W} 2^{-j-1} eps_{k-j}, in [0, 1/2).
  double coordinate(std::int64_t k) const;
  /// 2 x_k, the same point rescaled to [0, 1).
  double unit_coordinate(std::int64_t k) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::int64_t horizon_;
  int window_;
  std::vector<std::uint64_t> packed_;   // eps_{-W} .. eps_{n+W}
  std::vector<std::uint64_t> coords_;   // coordinate_bits(0) .. coordinate_bits(n+W)
};

ShiftTrajectory shift_trajectory(std::uint64_t seed, std::int64_t n,
                                 int window = ShiftTrajectory::kDefaultWindow,
                                 std::uint64_t stream = 0);

/// k -> (f o T^k)(base point).
using OrbitEvaluator = std::function<double(std::int64_t)>;

using OdometerFunction = std::function<double(const OdometerPoint&)>;
/// (trajectory, k) -> observable evaluated at T^k of the base point.
using ShiftObservable = std::function<double(const ShiftTrajectory&, std::int64_t)>;

OrbitEvaluator odometer_orbit(OdometerFunction f, OdometerPoint base);
OrbitEvaluator shift_orbit(ShiftObservable f, const ShiftTrajectory& trajectory);

/// Partial sums S_k = sum_{j<k} f o T^j with the polygonal path of the
/// invariance principle sampled on a t-grid.
struct PathSummary {
  std::int64_t horizon = 0;
  std::vector<double> partial_sums;             // S_0 .. S_n
  std::vector<double> grid;                     // t in [0, 1]
  std::vector<double> polygonal;                // S_n^pl(f, t) on the grid
  std::vector<double> running_max_abs_sum;      // max_{j<=k} |S_j|, k = 0..n
  std::vector<double> running_max_abs_transfer; // max_{1<=j<=k} |g o T^j|, k = 0..n; empty if no g

  double summand(std::int64_t k) const;  // S_{k+1} - S_k, i.e. f o T^k
  double polygonal_at(double t) const;
};

/// Walks the orbit for n steps. When `transfer` is given, the running maximum
/// of |g o T^j| over 1 <= j <= k is recorded as well.
PathSummary birkhoff(const OrbitEvaluator& summand, std::int64_t n,
                     std::span<const double> t_grid,
                     const OrbitEvaluator* transfer = nullptr);

/// Evenly spaced grid {0, 1/m, ..., 1}.
std::vector<double> uniform_t_grid(int m);

}  // namespace cobound::dynamics

#endif  // COBOUND_DYNAMICS_HPP
