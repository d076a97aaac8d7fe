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

#include "cobound/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cobound/error.hpp"
#include "cobound/parallel.hpp"
#include "cobound/weak_tails.hpp"

namespace cobound::maximal {

namespace {

using i128 = __int128;

std::int64_t to_scaled(double v, const char* what) {
  const double s = std::ldexp(v, kScaleBits);
  if (!(std::abs(s) < 0x1p50) || s != std::floor(s)) {
    throw PreconditionError(std::string(what) + " " + std::to_string(v) +
                            " is not a multiple of 2^-20 below 2^30");
  }
  return static_cast<std::int64_t>(s);
}

// M* as the exact fraction num/den with num on the 2^-20 scale.
struct Fraction {
  i128 num = 0;
  std::int64_t den = 1;
};

struct LevelWeight {
  std::int64_t value;  // scaled
  std::uint64_t count;
};

// max over v of v^2 #{|h| >= v}, scaled by 2^40; levels sorted by value descending.
i128 weak_square(std::vector<LevelWeight> w) {
  std::sort(w.begin(), w.end(), [](const LevelWeight& a, const LevelWeight& b) { return a.value > b.value; });
  i128 best = 0;
  std::uint64_t cumulative = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    cumulative += w[j].count;
    if (j + 1 < w.size() && w[j + 1].value == w[j].value) continue;
    if (w[j].value == 0 || cumulative == 0) continue;
    const i128 v = w[j].value;
    best = std::max(best, v * v * static_cast<i128>(cumulative));
  }
  return best;
}

long double weak_power(std::vector<LevelWeight> w, long double q) {
  std::sort(w.begin(), w.end(), [](const LevelWeight& a, const LevelWeight& b) { return a.value > b.value; });
  long double best = 0.0L;
  std::uint64_t cumulative = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    cumulative += w[j].count;
    if (j + 1 < w.size() && w[j + 1].value == w[j].value) continue;
    if (w[j].value == 0 || cumulative == 0) continue;
    const long double v = std::ldexp(static_cast<long double>(w[j].value), -kScaleBits);
    best = std::max(best, std::pow(v, q) * static_cast<long double>(cumulative));
  }
  return best;
}

}  // namespace

LevelFunction LevelFunction::constant(int i, double c) {
  require(i >= 0 && i <= kMaxEnumerationBits, "level depth out of range");
  return {i, std::vector<double>(std::size_t{1} << i, c)};
}

LevelFunction LevelFunction::indicator_of_zero_cylinder(int i, int cylinder_depth) {
  require(cylinder_depth >= 0 && cylinder_depth <= i, "cylinder depth must not exceed the level depth");
  LevelFunction h = constant(i, 0.0);
  const std::size_t period = std::size_t{1} << cylinder_depth;
  for (std::size_t l = 0; l < h.values.size(); l += period) h.values[l] = 1.0;
  return h;
}

double LevelFunction::operator()(const dynamics::OdometerPoint& point) const {
  return values[static_cast<std::size_t>(dynamics::level(point, i))];
}

double truncated_mstar(const dynamics::OrbitEvaluator& h, std::int64_t n_max) {
  require(n_max >= 1, "N_max must be at least 1");
  long double sum = 0.0L;
  double best = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double v;
    try {
      v = h(n - 1);
    } catch (const EvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(n - 1, e.what());
    }
    sum += v;
    best = std::max(best, static_cast<double>(std::abs(sum) / static_cast<long double>(n)));
  }
  return best;
}

double truncated_mstar(const dynamics::OdometerFunction& h, const dynamics::OdometerPoint& point,
                       std::int64_t n_max) {
  return truncated_mstar(dynamics::odometer_orbit(h, point), n_max);
}

std::size_t MaximalReport::violations_maximal() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ThresholdRow& r) { return !r.holds_maximal; }));
}
std::size_t MaximalReport::violations_weak() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ThresholdRow& r) { return !r.holds_weak; }));
}
std::size_t MaximalReport::violations_weak_global() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ThresholdRow& r) { return !r.holds_weak_global; }));
}

nlohmann::ordered_json MaximalReport::to_json() const {
  nlohmann::ordered_json out;
  out["truncation_depth"] = n_max;
  out["precision"] = precision;
  out["exponent_q"] = q;
  out["exact_weak_comparison"] = exact_weak;
  out["note"] = "M* is truncated at truncation_depth; every inequality is checked for the truncated maximum";
  out["weak_norm_h"] = weak_norm_h;
  out["mstar_norm_q"] = mstar_norm_q;
  out["violations_maximal"] = violations_maximal();
  out["violations_weak"] = violations_weak();
  out["violations_weak_global"] = violations_weak_global();
  auto& list = out["thresholds"] = nlohmann::ordered_json::array();
  for (const ThresholdRow& r : rows) {
    list.push_back({{"t", r.t},
                    {"measure", r.measure.str()},
                    {"measure_value", r.measure.to_double()},
                    {"expectation", r.expectation},
                    {"slack_maximal", r.slack_maximal},
                    {"holds_maximal", r.holds_maximal},
                    {"weak_restricted", r.weak_restricted},
                    {"slack_weak", r.slack_weak},
                    {"holds_weak", r.holds_weak},
                    {"slack_weak_global", r.slack_weak_global},
                    {"holds_weak_global", r.holds_weak_global}});
  }
  return out;
}

std::string MaximalReport::to_csv() const {
  std::string out =
      "t,measure,expectation,slack_maximal,holds_maximal,weak_restricted,slack_weak,holds_weak,slack_weak_global,"
      "holds_weak_global\n";
  char line[512];
  for (const ThresholdRow& r : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%d,%.17g,%d\n", r.t,
                  r.measure.to_double(), r.expectation, r.slack_maximal, r.holds_maximal ? 1 : 0,
                  r.weak_restricted, r.slack_weak, r.holds_weak ? 1 : 0, r.slack_weak_global,
                  r.holds_weak_global ? 1 : 0);
    out += line;
  }
  return out;
}

std::vector<double> dyadic_threshold_grid(double top, std::size_t count) {
  require(top > 0.0 && count >= 1, "threshold grid needs top > 0 and at least one point");
  std::vector<double> grid;
  for (std::size_t j = 1; j <= count; ++j) {
    const double t = top * static_cast<double>(j) / static_cast<double>(count);
    const double rounded = std::ldexp(std::round(std::ldexp(t, kScaleBits)), -kScaleBits);
    if (rounded > 0.0 && (grid.empty() || rounded > grid.back())) grid.push_back(rounded);
  }
  return grid;
}

MaximalReport maximal_inequality_report(const LevelFunction& h, int precision, std::int64_t n_max,
                                        std::span<const double> thresholds, double q,
                                        unsigned workers) {
  if (precision > kMaxEnumerationBits) {
    throw ResourceLimitError("enumeration over 2^" + std::to_string(precision) +
                             " points refused: B must be at most 20");
  }
  require(precision >= 1, "B must be at least 1");
  require(h.i >= 0 && h.i <= precision, "level function depth must not exceed B");
  require(h.values.size() == (std::size_t{1} << h.i), "level function needs 2^i values");
  require(n_max >= 1, "N_max must be at least 1");
  require(q > 1.0, "q must exceed 1");
  for (double t : thresholds) require(t > 0.0, "thresholds must be positive");

  std::vector<std::int64_t> hs(h.values.size());
  for (std::size_t l = 0; l < hs.size(); ++l) {
    require(h.values[l] >= 0.0, "h must be non-negative for the maximal inequality");
    hs[l] = to_scaled(h.values[l], "h value");
  }
  std::vector<std::int64_t> ts(thresholds.size());
  for (std::size_t j = 0; j < ts.size(); ++j) ts[j] = to_scaled(thresholds[j], "threshold");

  const std::size_t points = std::size_t{1} << precision;
  const std::uint64_t level_mask = (std::uint64_t{1} << h.i) - 1;
  std::vector<Fraction> mstar(points);
  parallel_chunks(points, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      i128 sum = 0;
      Fraction best;
      for (std::int64_t n = 1; n <= n_max; ++n) {
        sum += hs[(w + static_cast<std::uint64_t>(n - 1)) & level_mask];
        const i128 a = sum < 0 ? -sum : sum;
        if (a * best.den > best.num * n) best = {a, n};
      }
      mstar[w] = best;
    }
  });

  MaximalReport report;
  report.precision = precision;
  report.n_max = n_max;
  report.q = q;
  report.exact_weak = q == 2.0;
  const long double lq = q;
  const long double factor = lq / (lq - 1.0L);
  const long double total = static_cast<long double>(points);

  std::vector<LevelWeight> global(hs.size());
  for (std::size_t l = 0; l < hs.size(); ++l) global[l] = {hs[l], points >> h.i};
  const i128 global_sq = weak_square(global);
  const long double global_pow = weak_power(global, lq);
  report.weak_norm_h = static_cast<double>(std::pow(global_pow / total, 1.0L / lq));

  std::vector<double> mstar_values(points);
  for (std::size_t w = 0; w < points; ++w) {
    mstar_values[w] = static_cast<double>(std::ldexp(static_cast<long double>(mstar[w].num), -kScaleBits) /
                                          static_cast<long double>(mstar[w].den));
  }
  report.mstar_norm_q = tails::strong_norm(mstar_values, q);

  std::vector<std::uint64_t> level_counts(hs.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    std::fill(level_counts.begin(), level_counts.end(), 0);
    std::uint64_t count = 0;
    i128 mass = 0;
    for (std::size_t w = 0; w < points; ++w) {
      if (mstar[w].num >= static_cast<i128>(ts[j]) * mstar[w].den) {
        ++count;
        const std::size_t l = w & level_mask;
        ++level_counts[l];
        mass += hs[l];
      }
    }
    std::vector<LevelWeight> restricted;
    for (std::size_t l = 0; l < hs.size(); ++l) {
      if (level_counts[l] != 0) restricted.push_back({hs[l], level_counts[l]});
    }

    ThresholdRow row;
    row.t = thresholds[j];
    row.measure = Rational::dyadic(static_cast<std::int64_t>(count), precision);
    const long double mu = static_cast<long double>(count) / total;
    const long double expectation = std::ldexp(static_cast<long double>(mass), -kScaleBits) / total;
    row.expectation = static_cast<double>(expectation);
    row.slack_maximal = static_cast<double>(expectation - static_cast<long double>(row.t) * mu);
    // Both sides carry 2^-20 and 1/2^B, which cancel.
    row.holds_maximal = static_cast<i128>(ts[j]) * static_cast<i128>(count) <= mass;

    const long double restricted_pow = weak_power(restricted, lq);
    row.weak_restricted = static_cast<double>(std::pow(restricted_pow / total, 1.0L / lq));
    const long double lhs_weak = static_cast<long double>(row.t) * std::pow(mu, 1.0L / lq);
    row.slack_weak = static_cast<double>(factor * row.weak_restricted - lhs_weak);
    row.slack_weak_global = static_cast<double>(factor * report.weak_norm_h - lhs_weak);
    const long double t_pow = std::pow(static_cast<long double>(row.t), lq);
    if (report.exact_weak) {
      // t^2 mu(A) <= 4 sup v^2 mu{h 1_A >= v}, all on the 2^-40 / 2^-B scale
      const i128 t2 = static_cast<i128>(ts[j]) * ts[j];
      row.holds_weak = t2 * static_cast<i128>(count) <= 4 * weak_square(restricted);
      row.holds_weak_global = t2 * static_cast<i128>(count) <= 4 * global_sq;
    } else {
      const long double fq = std::pow(factor, lq);
      row.holds_weak = t_pow * static_cast<long double>(count) <= fq * restricted_pow;
      row.holds_weak_global = t_pow * static_cast<long double>(count) <= fq * global_pow;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cobound::maximal
