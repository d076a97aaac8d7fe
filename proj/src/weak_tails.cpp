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

#include "cobound/weak_tails.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "cobound/error.hpp"

namespace cobound::tails {

namespace {

void require_grid(std::span<const double> grid) {
  require(!grid.empty(), "threshold grid is empty");
  for (std::size_t m = 0; m < grid.size(); ++m) {
    require(std::isfinite(grid[m]) && grid[m] > 0.0, "threshold grid must be positive");
    if (m > 0) require(grid[m] > grid[m - 1], "threshold grid must be strictly increasing");
  }
}

}  // namespace

SimpleFunctionRep SimpleFunctionRep::from_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  Rational total;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    require(std::isfinite(atoms[j].value) && atoms[j].value > 0.0,
            "simple-function values must be positive and finite");
    require(atoms[j].measure.sign() > 0, "simple-function measures must be positive");
    if (j > 0) require(atoms[j].value != atoms[j - 1].value, "simple-function values must be distinct");
    total += atoms[j].measure;
  }
  require(total <= Rational(1), "simple-function measures sum to more than 1");
  SimpleFunctionRep rep;
  rep.atoms_ = std::move(atoms);
  return rep;
}

SimpleFunctionRep SimpleFunctionRep::accumulate(std::span<const Atom> atoms) {
  std::map<double, Rational> merged;
  for (const Atom& a : atoms) {
    require(std::isfinite(a.value) && a.value >= 0.0, "simple-function values must be non-negative");
    require(a.measure.sign() >= 0, "simple-function measures must be non-negative");
    if (a.value == 0.0 || a.measure.sign() == 0) continue;
    merged[a.value] += a.measure;
  }
  std::vector<Atom> out;
  out.reserve(merged.size());
  for (const auto& [value, measure] : merged) out.push_back({value, measure});
  return from_atoms(std::move(out));
}

Rational SimpleFunctionRep::support_measure() const {
  Rational total;
  for (const Atom& a : atoms_) total += a.measure;
  return total;
}

std::vector<double> SimpleFunctionRep::jump_points() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back(a.value);
  return out;
}

std::string TailProfile::to_csv() const {
  std::string out = "t,tail,t_pow_q_tail\n";
  char line[128];
  for (std::size_t m = 0; m < thresholds.size(); ++m) {
    const double t = thresholds[m];
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", t, tails[m],
                  std::pow(t, exponent) * tails[m]);
    out += line;
  }
  return out;
}

TailProfile tail_profile(const SimpleFunctionRep& h, std::span<const double> grid, double q) {
  require_grid(grid);
  TailProfile p;
  p.source = TailSource::kExact;
  p.exponent = q;
  p.thresholds.assign(grid.begin(), grid.end());
  const auto& atoms = h.atoms();
  // Suffix sums over atoms sorted by value.
  std::vector<Rational> suffix(atoms.size() + 1);
  for (std::size_t j = atoms.size(); j-- > 0;) suffix[j] = suffix[j + 1] + atoms[j].measure;
  for (double t : grid) {
    const auto above = std::upper_bound(atoms.begin(), atoms.end(), t,
                                        [](double v, const Atom& a) { return v < a.value; });
    const auto at_or_above = std::lower_bound(atoms.begin(), atoms.end(), t,
                                              [](const Atom& a, double v) { return a.value < v; });
    const Rational strict = suffix[static_cast<std::size_t>(above - atoms.begin())];
    const Rational weak = suffix[static_cast<std::size_t>(at_or_above - atoms.begin())];
    p.exact_tails.push_back(strict);
    p.exact_left_tails.push_back(weak);
    p.tails.push_back(strict.to_double());
    p.left_tails.push_back(weak.to_double());
  }
  return p;
}

TailProfile tail_profile(std::span<const double> samples, std::span<const double> grid, double q) {
  require(!samples.empty(), "empirical tail profile needs at least one sample");
  require_grid(grid);
  std::vector<double> sorted(samples.size());
  std::transform(samples.begin(), samples.end(), sorted.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(sorted.begin(), sorted.end());
  TailProfile p;
  p.source = TailSource::kEmpirical;
  p.sample_count = samples.size();
  p.exponent = q;
  p.thresholds.assign(grid.begin(), grid.end());
  const auto n = static_cast<double>(sorted.size());
  for (double t : grid) {
    const auto strict = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    const auto weak = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t);
    p.tails.push_back(static_cast<double>(strict) / n);
    p.left_tails.push_back(static_cast<double>(weak) / n);
  }
  return p;
}

const char* to_string(L0Verdict verdict) {
  switch (verdict) {
    case L0Verdict::kConsistent: return "consistent";
    case L0Verdict::kInconsistent: return "inconsistent";
    case L0Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

WeakNormResult weak_norm(const TailProfile& profile, double q) {
  require(q >= 1.0, "weak norms need q >= 1");
  require(!profile.thresholds.empty(), "tail profile is empty");
  const bool exact = profile.source == TailSource::kExact;
  WeakNormResult r;
  for (std::size_t m = 0; m < profile.thresholds.size(); ++m) {
    const double tq = std::pow(profile.thresholds[m], q);
    r.value = std::max(r.value, tq * profile.tails[m]);
    if (exact) r.value = std::max(r.value, tq * profile.left_tails[m]);
  }
  const double t_top = profile.thresholds.back();
  r.tail_indicator = std::pow(t_top, q) * profile.tails.back();

  if (exact) {
    require(profile.tails.back() == 0.0,
            "exact weak norm needs a grid reaching the essential supremum");
    r.verdict = L0Verdict::kConsistent;
    return r;
  }
  // Top three decades [t/1000, t/100), [t/100, t/10), [t/10, t].
  const double t_low = t_top / 1000.0;
  if (profile.thresholds.front() > t_low) {
    r.verdict = L0Verdict::kInconclusive;
    return r;
  }
  for (std::size_t m = 0; m < profile.thresholds.size(); ++m) {
    const double t = profile.thresholds[m];
    if (t < t_low) continue;
    const int decade = t < t_top / 100.0 ? 0 : (t < t_top / 10.0 ? 1 : 2);
    r.decade_maxima[static_cast<std::size_t>(decade)] =
        std::max(r.decade_maxima[static_cast<std::size_t>(decade)], std::pow(t, q) * profile.tails[m]);
  }
  const auto& d = r.decade_maxima;
  if (d[0] > d[1] && d[1] > d[2] && d[2] <= d[0] / 4.0) {
    r.verdict = L0Verdict::kConsistent;
  } else if (d[0] > 0.0 && d[2] >= d[0]) {
    r.verdict = L0Verdict::kInconsistent;
  } else {
    r.verdict = L0Verdict::kInconclusive;
  }
  return r;
}

double strong_norm(const SimpleFunctionRep& h, double q) {
  require(q >= 1.0, "strong norms need q >= 1");
  long double total = 0.0L;
  for (const Atom& a : h.atoms()) {
    total += std::pow(static_cast<long double>(a.value), static_cast<long double>(q)) *
             a.measure.to_long_double();
  }
  return static_cast<double>(std::pow(total, 1.0L / static_cast<long double>(q)));
}

double strong_norm(std::span<const double> samples, double q) {
  require(q >= 1.0, "strong norms need q >= 1");
  require(!samples.empty(), "strong norm of an empty sample");
  long double total = 0.0L;
  for (double v : samples) total += std::pow(std::abs(static_cast<long double>(v)), static_cast<long double>(q));
  total /= static_cast<long double>(samples.size());
  return static_cast<double>(std::pow(total, 1.0L / static_cast<long double>(q)));
}

std::vector<double> log_grid(std::span<const double> samples, std::size_t points) {
  require(points >= 2, "log grid needs at least two points");
  double lo = 0.0;
  double hi = 0.0;
  for (double v : samples) {
    const double a = std::abs(v);
    if (a > 0.0 && (lo == 0.0 || a < lo)) lo = a;
    hi = std::max(hi, a);
  }
  require(hi > 0.0, "log grid needs a positive sample");
  if (hi == lo) return {hi};
  std::vector<double> grid(points);
  const double ratio = std::log(hi / lo);
  for (std::size_t m = 0; m < points; ++m) {
    grid[m] = lo * std::exp(ratio * static_cast<double>(m) / static_cast<double>(points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> draw_samples(const SimpleFunctionRep& h, const CounterRng& rng,
                                 std::size_t count) {
  std::vector<long double> cumulative;
  long double acc = 0.0L;
  for (const Atom& a : h.atoms()) {
    acc += a.measure.to_long_double();
    cumulative.push_back(acc);
  }
  std::vector<double> out(count, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const long double u = rng.uniform(s);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it != cumulative.end()) out[s] = h.atoms()[static_cast<std::size_t>(it - cumulative.begin())].value;
  }
  return out;
}

}  // namespace cobound::tails
