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

#include "cobound/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cobound/error.hpp"

namespace cobound::cex {

namespace {

Rational exact(double x) { return Rational::from_double_shortest(x); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

long double log_log(long double n) { return std::log(std::log(n)); }

std::uint64_t window_k(int i, double exponent) {
  return static_cast<std::uint64_t>(std::ceil(std::exp2(static_cast<double>(i) * exponent)));
}

}  // namespace

const char* to_string(Kind kind) {
  return kind == Kind::kStrongLaw ? "SLLN" : "IP_LIL";
}

bool ParameterWindow::contains(double x) const {
  const Rational v = exact(x);
  return lower < v && v < upper;
}

ParameterWindow ip_window(const Exponents& e) {
  require(e.p >= 1.0 && e.p < 2.0, "invariance-principle counterexample needs 1 <= p < 2");
  require(e.r >= 2.0, "invariance-principle counterexample needs r >= 2");
  const Rational p = exact(e.p);
  const Rational r = exact(e.r);
  const Rational one(1);
  const Rational two(2);
  return {(r - two) / (two * (r - one)), one - p / two};
}

ParameterWindow slln_window(const Exponents& e) {
  require(e.p > 1.0 && e.p < 2.0, "strong-law counterexample needs 1 < p < 2");
  require(e.q >= 1.0 && e.q < e.p && e.p < e.r, "strong-law counterexample needs 1 <= q < p < r");
  const Rational q = exact(e.q);
  const Rational p = exact(e.p);
  const Rational r = exact(e.r);
  const Rational one(1);
  return {(r - p) / (p * (r - one)), one - q / p};
}

std::uint64_t TowerTerm::multiplier(std::uint64_t level) const {
  require(level < n, "tower level out of range");
  const std::uint64_t j = n - level;  // level 0 gives j = n, outside the band
  if (j >= 1 && j <= k) return j;
  if (j > k && j < 2 * k) return 2 * k - j;
  return 0;
}

std::vector<std::pair<std::uint64_t, double>> TowerTerm::nonzero_levels() const {
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(2 * k - 1);
  for (std::uint64_t j = 2 * k - 1; j >= 1; --j) out.emplace_back(n - j, value(n - j));
  return out;
}

tails::SimpleFunctionRep TowerTerm::distribution() const {
  std::vector<tails::Atom> atoms;
  atoms.reserve(k);
  for (std::uint64_t m = 1; m <= k; ++m) {
    const std::int64_t count = m == k ? 1 : 2;
    atoms.push_back({amplitude * static_cast<double>(m), Rational::dyadic(count, i)});
  }
  return tails::SimpleFunctionRep::accumulate(atoms);
}

tails::SimpleFunctionRep TowerTerm::coboundary_distribution() const {
  std::vector<tails::Atom> atoms;
  // Only levels next to the band can differ from their successor.
  const std::uint64_t first = n - 2 * k - 1;
  for (std::uint64_t level = first; level < n; ++level) {
    const std::uint64_t here = multiplier(level);
    const std::uint64_t next = multiplier((level + 1) % n);
    const std::uint64_t diff = here > next ? here - next : next - here;
    if (diff != 0) atoms.push_back({amplitude * static_cast<double>(diff), Rational::dyadic(1, i)});
  }
  return tails::SimpleFunctionRep::accumulate(atoms);
}

const TowerTerm& TowerCounterexample::term(int i) const {
  require(i >= i0 && i <= i_max, "tower index " + std::to_string(i) + " outside [" +
                                     std::to_string(i0) + ", " + std::to_string(i_max) + "]");
  return terms[static_cast<std::size_t>(i - i0)];
}

int default_start_index(Kind, double window_exponent) {
  for (int i = 1; i <= 62; ++i) {
    const std::uint64_t n = std::uint64_t{1} << i;
    if (2 * window_k(i, window_exponent) < n && static_cast<double>(n) > std::exp(std::exp(1.0))) {
      return i;
    }
  }
  throw PreconditionError("no admissible start index below 62");
}

TowerCounterexample build_tower_counterexample(Kind kind, const Exponents& exponents,
                                               WindowChoice choice, std::optional<int> i0,
                                               int i_max, int precision) {
  TowerCounterexample cex;
  cex.kind = kind;
  cex.exponents = exponents;
  if (kind == Kind::kInvariancePrinciple) {
    cex.window = ip_window(exponents);
    if (cex.window.width().sign() <= 0) {
      throw PreconditionError(
          "empty window (r-2)/(2(r-1)) < alpha < 1 - p/2 for p = " + fmt(exponents.p) +
          ", r = " + fmt(exponents.r) + ": requires p < r/(r-1)");
    }
  } else {
    cex.window = slln_window(exponents);
    if (cex.window.width().sign() <= 0) {
      throw PreconditionError(
          "empty window (r-p)/(p(r-1)) < beta < 1 - q/p for q = " + fmt(exponents.q) +
          ", p = " + fmt(exponents.p) + ", r = " + fmt(exponents.r) +
          ": requires q < (p-1)r/(r-1)");
    }
  }
  if (choice.rule == WindowChoice::Rule::kMidpoint) {
    cex.window_exponent = ((cex.window.lower + cex.window.upper) / Rational(2)).to_double();
  } else {
    require(cex.window.contains(choice.value),
            "window exponent " + fmt(choice.value) + " outside the open window (" +
                fmt(cex.window.lower.to_double()) + ", " + fmt(cex.window.upper.to_double()) + ")");
    cex.window_exponent = choice.value;
  }
  require(precision >= 1 && precision <= dynamics::OdometerPoint::kMaxPrecision,
          "odometer precision must lie in [1, 62]");
  require(i_max <= precision, "largest tower index " + std::to_string(i_max) +
                                  " exceeds the odometer precision " + std::to_string(precision));
  cex.i0 = i0.value_or(default_start_index(kind, cex.window_exponent));
  cex.i_max = i_max;
  cex.precision = precision;
  require(cex.i0 >= 1 && cex.i0 <= i_max, "start index must lie in [1, i_max]");

  for (int i = cex.i0; i <= i_max; ++i) {
    TowerTerm t;
    t.i = i;
    t.n = std::uint64_t{1} << i;
    t.k = window_k(i, cex.window_exponent);
    require(2 * t.k < t.n, "tower " + std::to_string(i) + " violates 2k_i < n_i");
    require(t.n >= 16, "tower " + std::to_string(i) + " needs n_i >= 16 so that log log n_i > 0");
    const long double n = static_cast<long double>(t.n);
    const long double k = static_cast<long double>(t.k);
    if (kind == Kind::kInvariancePrinciple) {
      t.amplitude = static_cast<double>(std::sqrt(n * log_log(n)) / k);
    } else {
      t.amplitude = static_cast<double>(std::pow(n, 1.0L / exponents.p) / k);
    }
    cex.terms.push_back(t);
  }
  return cex;
}

GValue eval_g(const TowerCounterexample& cex, const dynamics::OdometerPoint& point) {
  require(point.precision() == cex.precision, "point precision differs from the counterexample's B");
  GValue out;
  for (const TowerTerm& t : cex.terms) out.value += t.value(dynamics::level(point, t.i));
  out.truncation_risk = truncation_risk(cex);
  return out;
}

double truncation_risk(const TowerCounterexample& cex) { return orbit_truncation_risk(cex, 0); }

double orbit_truncation_risk(const TowerCounterexample& cex, std::int64_t n) {
  long double total = 0.0L;
  for (int i = cex.i_max + 1; i < 1000; ++i) {
    const long double ni = std::exp2(static_cast<long double>(i));
    const long double ki = std::ceil(std::exp2(static_cast<long double>(i) * cex.window_exponent));
    const long double term = (static_cast<long double>(n) + 2.0L * ki) / ni;
    total += term;
    if (term < 1e-30L * std::max(total, 1e-300L)) break;
  }
  return static_cast<double>(std::min(total, 1.0L));
}

double asymptotic_decay_ratio(const TowerCounterexample& cex) {
  const double p = cex.exponents.p;
  if (cex.kind == Kind::kInvariancePrinciple) {
    return std::exp2((cex.window_exponent - 1.0 + p / 2.0) / p);
  }
  const double q = cex.exponents.q;
  return std::exp2(cex.window_exponent / q + 1.0 / p - 1.0 / q);
}

NormTable exact_norms(const TowerCounterexample& cex, double epsilon) {
  NormTable table;
  const double s = cex.transfer_exponent();
  const double r = cex.exponents.r;
  const double p = cex.exponents.p;
  const double base_ratio = asymptotic_decay_ratio(cex);
  for (const TowerTerm& t : cex.terms) {
    NormRow row;
    row.i = t.i;
    row.n = t.n;
    row.k = t.k;
    row.amplitude = t.amplitude;
    row.norm_transfer = tails::strong_norm(t.distribution(), s);
    const long double n = static_cast<long double>(t.n);
    const long double k = static_cast<long double>(t.k);
    if (cex.kind == Kind::kInvariancePrinciple) {
      row.norm_transfer_bound = static_cast<double>(
          std::pow(2.0L, 1.0L / p) * std::pow(n, 0.5L - 1.0L / p) * std::sqrt(log_log(n)) *
          std::pow(k, 1.0L / p));
      row.violation_probability = ip_event_probability(cex, t.i, epsilon).to_double();
    } else {
      row.norm_transfer_bound = static_cast<double>(
          std::pow(2.0L, 1.0L / s) * std::pow(n, 1.0L / p - 1.0L / s) * std::pow(k, 1.0L / s));
      row.violation_probability =
          slln_event_probability(cex, t.i, std::int64_t{1} << t.i, std::int64_t{1} << (t.i + 1))
              .to_double();
    }
    const tails::SimpleFunctionRep cob = t.coboundary_distribution();
    row.norm_coboundary = tails::strong_norm(cob, r);
    row.coboundary_support = cob.support_measure();
    row.coboundary_support_bound = Rational::dyadic(static_cast<std::int64_t>(2 * t.k), t.i);
    row.norm_coboundary_bound = static_cast<double>(
        static_cast<long double>(t.amplitude) * std::pow(2.0L * k / n, 1.0L / r));
    if (!table.rows.empty()) {
      const NormRow& prev = table.rows.back();
      row.decay_ratio = row.norm_transfer / prev.norm_transfer;
      double drift = 1.0;
      if (cex.kind == Kind::kInvariancePrinciple) {
        drift = static_cast<double>(std::sqrt(log_log(n) / log_log(static_cast<long double>(prev.n))));
      }
      row.predicted_ratio = base_ratio * drift;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string NormTable::to_csv() const {
  std::string out = "i,n_i,k_i,a_i,norm_p_exact,bound_355,norm_r_exact,bound_358,violation_prob\n";
  char line[512];
  for (const NormRow& row : rows) {
    std::snprintf(line, sizeof(line), "%d,%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.i,
                  static_cast<unsigned long long>(row.n), static_cast<unsigned long long>(row.k),
                  row.amplitude, row.norm_transfer, row.norm_transfer_bound, row.norm_coboundary,
                  row.norm_coboundary_bound, row.violation_probability);
    out += line;
  }
  return out;
}

Rational exact_violation_probability(const TowerCounterexample& cex, int i, std::int64_t lo,
                                     std::int64_t hi, double multiplier_threshold,
                                     Comparison cmp) {
  const TowerTerm& t = cex.term(i);
  require(hi >= lo, "violation window must satisfy lo <= hi");
  std::vector<std::uint64_t> hits;
  for (std::uint64_t j = 1; j < 2 * t.k; ++j) {
    const auto m = static_cast<double>(t.multiplier(t.n - j));
    const bool pass = cmp == Comparison::kGreaterEqual ? m >= multiplier_threshold : m > multiplier_threshold;
    if (pass) hits.push_back(t.n - j);
  }
  if (hits.empty()) return Rational(0);
  const auto len = static_cast<std::uint64_t>(hi - lo) + 1;
  if (len >= t.n) return Rational(1);
  // Residue w passes iff w + l hits a band level for some l in [lo, hi], i.e.
  // w lies in the arc [level - hi, level - lo] mod n. Arcs share one length, so
  // the union is the sum over sorted starts of min(len, gap to the next start).
  const std::uint64_t mask = t.n - 1;
  std::vector<std::uint64_t> starts;
  starts.reserve(hits.size());
  for (std::uint64_t level : hits) starts.push_back((level - static_cast<std::uint64_t>(hi)) & mask);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  std::uint64_t covered = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::uint64_t next = s + 1 < starts.size() ? starts[s + 1] : starts[0] + t.n;
    covered += std::min(len, next - starts[s]);
  }
  return Rational::dyadic(static_cast<std::int64_t>(covered), i);
}

Rational exact_violation_probability_at(const TowerCounterexample& cex, int i, std::int64_t lo,
                                        std::int64_t hi, double threshold, Comparison cmp) {
  const TowerTerm& t = cex.term(i);
  return exact_violation_probability(cex, i, lo, hi, threshold / t.amplitude, cmp);
}

Rational slln_event_probability(const TowerCounterexample& cex, int i, std::int64_t lo,
                                std::int64_t hi) {
  require(cex.kind == Kind::kStrongLaw, "strong-law event needs a strong-law counterexample");
  // 2^{i/p} / (n_i^{1/p} / k_i) = k_i, so the event is "multiplier reaches k_i".
  const TowerTerm& t = cex.term(i);
  return exact_violation_probability(cex, i, lo, hi, static_cast<double>(t.k),
                                     Comparison::kGreaterEqual);
}

Rational ip_event_probability(const TowerCounterexample& cex, int i, double epsilon) {
  require(cex.kind == Kind::kInvariancePrinciple,
          "invariance-principle event needs an invariance-principle counterexample");
  require(epsilon > 0.0, "epsilon must be positive");
  const TowerTerm& t = cex.term(i);
  // eps sqrt(n) / (sqrt(n log log n) / k) = eps k / sqrt(log log n)
  const long double n = static_cast<long double>(t.n);
  const auto m = static_cast<double>(epsilon * static_cast<long double>(t.k) / std::sqrt(log_log(n)));
  return exact_violation_probability(cex, i, 1, static_cast<std::int64_t>(t.n), m, Comparison::kGreater);
}

TowerBound orbit_max_lower_bound(const TowerCounterexample& cex, std::int64_t lo, std::int64_t hi,
                                 double threshold) {
  TowerBound best;
  for (const TowerTerm& t : cex.terms) {
    const Rational p = exact_violation_probability_at(cex, t.i, lo, hi, threshold, Comparison::kGreater);
    if (p > best.probability) {
      best.probability = p;
      best.tower = t.i;
    }
  }
  return best;
}

dynamics::PathSummary telescoped_partial_sums(const TowerCounterexample& cex,
                                              const dynamics::OdometerPoint& point, std::int64_t n,
                                              std::span<const double> t_grid) {
  require(n >= 0, "horizon must be non-negative");
  require(static_cast<std::uint64_t>(n) <= point.modulus(),
          "horizon exceeds the odometer period 2^B");
  if (n > (std::int64_t{1} << 28)) throw ResourceLimitError("telescoped path longer than 2^28");
  dynamics::PathSummary out;
  out.horizon = n;
  const auto len = static_cast<std::size_t>(n) + 1;
  out.partial_sums.resize(len);
  out.running_max_abs_sum.resize(len);
  out.running_max_abs_transfer.resize(len);
  const double g0 = eval_g(cex, point).value;
  for (std::int64_t k = 0; k <= n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const double gk = k == 0 ? g0 : eval_g(cex, dynamics::odometer_advance(point, k)).value;
    out.partial_sums[idx] = k == 0 ? 0.0 : g0 - gk;
    out.running_max_abs_sum[idx] =
        idx == 0 ? 0.0 : std::max(out.running_max_abs_sum[idx - 1], std::abs(out.partial_sums[idx]));
    out.running_max_abs_transfer[idx] =
        idx == 0 ? 0.0 : std::max(out.running_max_abs_transfer[idx - 1], std::abs(gk));
  }
  out.grid.assign(t_grid.begin(), t_grid.end());
  for (double t : out.grid) out.polygonal.push_back(out.polygonal_at(t));
  return out;
}

}  // namespace cobound::cex
