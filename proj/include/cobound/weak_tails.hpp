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

#ifndef COBOUND_WEAK_TAILS_HPP
#define COBOUND_WEAK_TAILS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cobound/rational.hpp"
#include "cobound/rng.hpp"

namespace cobound::tails {

struct Atom {
  double value = 0.0;  // > 0
  Rational measure;    // in (0, 1]
};

/// Non-negative simple function: value v_j on a set of measure m_j, 0 elsewhere.
/// Atoms are kept sorted by value, values are distinct and positive, and the
/// measures sum to at most 1.
class SimpleFunctionRep {
 public:
  SimpleFunctionRep() = default;

  /// Validates the invariants exactly as given (no merging).
  static SimpleFunctionRep from_atoms(std::vector<Atom> atoms);
  /// Merges equal values and drops zero values or zero measures first.
  static SimpleFunctionRep accumulate(std::span<const Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  Rational support_measure() const;
  double max_value() const noexcept { return atoms_.empty() ? 0.0 : atoms_.back().value; }
  /// The distinct values, ascending: the jump points of t -> mu{h > t}.
  std::vector<double> jump_points() const;

 private:
  std::vector<Atom> atoms_;
};

enum class TailSource { kEmpirical, kExact };

struct TailProfile {
  TailSource source = TailSource::kEmpirical;
  std::size_t sample_count = 0;     // empirical only
  double exponent = 1.0;            // q used for the t^q column
  std::vector<double> thresholds;   // strictly increasing, positive
  std::vector<double> tails;        // mu{|h| > t}
  std::vector<double> left_tails;   // mu{|h| >= t}, the left limit of the tail at t
  std::vector<Rational> exact_tails;       // exact only
  std::vector<Rational> exact_left_tails;  // exact only

  /// Columns t, tail, t_pow_q_tail.
  std::string to_csv() const;
};

TailProfile tail_profile(const SimpleFunctionRep& h, std::span<const double> grid, double q = 1.0);
TailProfile tail_profile(std::span<const double> samples, std::span<const double> grid,
                         double q = 1.0);

enum class L0Verdict { kConsistent, kInconsistent, kInconclusive };
const char* to_string(L0Verdict verdict);

struct WeakNormResult {
  /// sup over the grid of t^q mu{|h| > t}, i.e. ||h||_{q,inf}^q.
  double value = 0.0;
  /// t^q tail(t) at the largest grid point.
  double tail_indicator = 0.0;
  /// max of t^q tail(t) over the three top decades of the grid, lowest first.
  std::array<double, 3> decade_maxima{};
  L0Verdict verdict = L0Verdict::kInconclusive;
};

/// For exact profiles the left limits are included, so the result is the true
/// supremum whenever the grid contains every jump point.
WeakNormResult weak_norm(const TailProfile& profile, double q);

double strong_norm(const SimpleFunctionRep& h, double q);
double strong_norm(std::span<const double> samples, double q);

/// Log-spaced grid between the smallest positive and the largest |sample|.
std::vector<double> log_grid(std::span<const double> samples, std::size_t points = 256);

/// i.i.d. draws of h at uniform points, indexed draws of the given generator.
std::vector<double> draw_samples(const SimpleFunctionRep& h, const CounterRng& rng,
                                 std::size_t count);

}  // namespace cobound::tails

#endif  // COBOUND_WEAK_TAILS_HPP
