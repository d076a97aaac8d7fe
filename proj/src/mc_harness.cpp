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

#include "cobound/mc_harness.hpp"
#include "cobound/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "cobound/dynamics.hpp"
#include "cobound/error.hpp"
#include "cobound/parallel.hpp"
#include "cobound/rng.hpp"

namespace cobound::mc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_log(double n) { return std::log(std::log(n)); }

double binomial_sigma(double p, std::uint64_t n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

// Odometer start of path `path`: block 0 of the path's stream. Shift bits of the
// same stream sit at counters from 2^56 upwards, so the two never overlap.
dynamics::OdometerPoint odometer_start(const ExperimentConfig& c, std::uint64_t path) {
  const std::uint64_t raw = CounterRng(c.seed, path).u64(0);
  const std::uint64_t mask = c.precision == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << c.precision) - 1;
  return dynamics::OdometerPoint(raw & mask, c.precision);
}

double closed_form(const TransferSpec& t, double u, int window) {
  switch (t.kind) {
    case TransferKind::kCosine:
      return t.amplitude * std::cos(2.0 * std::numbers::pi * u);
    case TransferKind::kIdentity:
      return t.amplitude * u;
    case TransferKind::kPower:
      // cell midpoint keeps the singular power finite at u = 0
      return t.amplitude * std::pow(u + std::ldexp(1.0, -window - 1), -t.power);
    default:
      return 0.0;
  }
}

void fill_transfer(const ExperimentConfig& c, std::uint64_t path, std::int64_t n,
                   const dynamics::ShiftTrajectory* traj, std::vector<double>& g) {
  g.assign(static_cast<std::size_t>(n) + 1, 0.0);
  if (c.transfer.kind == TransferKind::kNone) return;
  if (c.transfer.kind == TransferKind::kTower) {
    const cex::TowerCounterexample& t = *c.transfer.tower;
    const std::uint64_t mask = (std::uint64_t{1} << c.precision) - 1;
    std::uint64_t v = odometer_start(c, path).value();
    for (std::size_t k = 0; k < g.size(); ++k) {
      double sum = 0.0;
      for (const cex::TowerTerm& term : t.terms) sum += term.value(v & (term.n - 1));
      g[k] = sum;
      v = (v + 1) & mask;
    }
    return;
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = closed_form(c.transfer, traj->unit_coordinate(static_cast<std::int64_t>(k)), c.window);
  }
}

Verdict series_verdict(const std::vector<double>& increments) {
  if (increments.empty()) return Verdict::kInconclusive;
  if (std::all_of(increments.begin(), increments.end(), [](double v) { return v == 0.0; })) {
    return Verdict::kHolds;
  }
  bool shrinking = increments.size() >= 2;
  for (std::size_t a = 1; a < increments.size(); ++a) {
    if (increments[a] > increments[a - 1] / 4.0) shrinking = false;
  }
  if (shrinking) return Verdict::kHolds;
  if (increments.size() >= 2 && increments.back() >= 0.5 * increments.front() && increments.back() > 0.0) {
    return Verdict::kFails;
  }
  return Verdict::kInconclusive;
}

constexpr const char* kSeriesRule =
    "holds if every group increment is at most a quarter of the previous one (or all are 0); "
    "fails if the last increment is at least half the first; otherwise inconclusive";

void attach_oracle(EstimateRow& row, double exact, bool lower_bound) {
  row.exact = exact;
  row.exact_is_lower_bound = lower_bound;
  const double band = 3.0 * binomial_sigma(exact, row.paths);
  row.oracle_agrees = lower_bound ? row.estimate >= exact - band : std::abs(row.estimate - exact) <= band;
}

void finish_row(EstimateRow& row) {
  row.estimate = static_cast<double>(row.hits) / static_cast<double>(row.paths);
  row.std_error = binomial_sigma(row.estimate, row.paths);
}

double quantile(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) return kNaN;
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<std::pair<double, double>> quantiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  for (double level : {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) out.emplace_back(level, quantile(v, level));
  return out;
}

nlohmann::ordered_json pairs_json(const std::vector<std::pair<double, double>>& v) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& [level, value] : v) out.push_back({{"level", level}, {"value", value}});
  return out;
}

}  // namespace

const char* to_string(System s) { return s == System::kOdometer ? "odometer" : "shift"; }
const char* to_string(MartingaleKind m) { return m == MartingaleKind::kRademacher ? "rademacher" : "none"; }
const char* to_string(TransferKind t) {
  switch (t) {
    case TransferKind::kTower: return "tower";
    case TransferKind::kCosine: return "cosine";
    case TransferKind::kIdentity: return "identity";
    case TransferKind::kPower: return "power";
    default: return "none";
  }
}
const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "consistent-with-holds";
    case Verdict::kFails: return "consistent-with-fails";
    default: return "inconclusive";
  }
}

double TransferSpec::sup_norm() const {
  switch (kind) {
    case TransferKind::kNone: return 0.0;
    case TransferKind::kCosine:
    case TransferKind::kIdentity: return std::abs(amplitude);
    default: return std::numeric_limits<double>::infinity();
  }
}

void ExperimentConfig::validate() const {
  require(!horizons.empty(), "horizon grid is empty");
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    require(horizons[j] >= 1, "horizons must be positive");
    require(j == 0 || horizons[j] > horizons[j - 1], "horizons must be strictly increasing");
  }
  require(paths >= 100, "path count must be at least 100");
  require(!epsilons.empty(), "epsilon grid is empty");
  for (double e : epsilons) require(e > 0.0, "epsilons must be positive");
  require(p >= 1.0 && p <= 2.0, "exponent p must lie in [1, 2]");
  if (system == System::kOdometer) {
    require(precision >= 1 && precision <= 62, "odometer precision must lie in [1, 62]");
    const std::int64_t top = horizons.back();
    require(top <= (std::int64_t{1} << (precision - 1)),
            "largest horizon " + std::to_string(top) + " violates 2n <= 2^B with B = " +
                std::to_string(precision));
    require(transfer.kind == TransferKind::kNone || transfer.kind == TransferKind::kTower,
            "odometer runs take a tower transfer function or none");
  } else {
    require(window >= 1 && window <= 62, "shift window must lie in [1, 62]");
    require(transfer.kind != TransferKind::kTower, "tower transfer functions live on the odometer");
  }
  if (transfer.kind == TransferKind::kTower) {
    require(transfer.tower.has_value(), "tower transfer selected without a counterexample");
    require(transfer.tower->precision == precision, "counterexample precision differs from the odometer's B");
  }
  if (transfer.kind == TransferKind::kPower) require(transfer.power > 0.0, "power must be positive");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json out;
  out["system"] = to_string(system);
  if (system == System::kOdometer) out["precision"] = precision;
  else out["window"] = window;
  out["martingale"] = to_string(martingale);
  nlohmann::ordered_json t;
  t["kind"] = to_string(transfer.kind);
  if (transfer.kind == TransferKind::kTower) {
    const cex::TowerCounterexample& c = *transfer.tower;
    t["counterexample"] = cex::to_string(c.kind);
    t["q"] = c.exponents.q;
    t["p"] = c.exponents.p;
    t["r"] = c.exponents.r;
    t["window_exponent"] = c.window_exponent;
    t["i0"] = c.i0;
    t["i_max"] = c.i_max;
  } else if (transfer.kind != TransferKind::kNone) {
    t["amplitude"] = transfer.amplitude;
    if (transfer.kind == TransferKind::kPower) t["power"] = transfer.power;
  }
  out["transfer"] = t;
  out["horizons"] = horizons;
  out["paths"] = paths;
  out["seed"] = seed;
  out["epsilons"] = epsilons;
  out["p"] = p;
  if (alpha) out["alpha"] = *alpha;
  return out;
}

PathData sample_path(const ExperimentConfig& c, std::uint64_t path, std::int64_t n) {
  require(n >= 1, "path length must be positive");
  PathData d;
  const bool needs_bits = c.martingale == MartingaleKind::kRademacher ||
                          (c.system == System::kShift && c.transfer.kind != TransferKind::kNone);
  std::optional<dynamics::ShiftTrajectory> traj;
  if (needs_bits) traj.emplace(c.seed, n, c.window, path);
  if (c.martingale == MartingaleKind::kRademacher) {
    d.m.resize(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) d.m[static_cast<std::size_t>(k)] = traj->epsilon(k) ? 1.0 : -1.0;
  }
  fill_transfer(c, path, n, traj ? &*traj : nullptr, d.g);
  return d;
}

Verdict ConditionReport::verdict(double epsilon) const {
  for (const auto& [e, v] : verdicts) {
    if (e == epsilon) return v;
  }
  throw std::out_of_range("no verdict for epsilon " + std::to_string(epsilon));
}

bool ConditionReport::oracle_agrees() const {
  return std::all_of(rows.begin(), rows.end(), [](const EstimateRow& r) { return r.oracle_agrees; });
}

nlohmann::ordered_json ConditionReport::to_json() const {
  nlohmann::ordered_json out;
  out["condition"] = condition;
  out["config"] = config;
  out["code_version"] = kCodeVersion;
  out["decision_rule"] = decision_rule;
  auto& v = out["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& [e, verdict] : verdicts) v.push_back({{"epsilon", e}, {"verdict", to_string(verdict)}});
  out["oracle_agrees"] = oracle_agrees();
  auto& list = out["rows"] = nlohmann::ordered_json::array();
  for (const EstimateRow& r : rows) {
    nlohmann::ordered_json j{{"block", r.block},     {"n", r.n},
                             {"length", r.length},   {"epsilon", r.epsilon},
                             {"threshold", r.threshold}, {"hits", r.hits},
                             {"paths", r.paths},     {"estimate", r.estimate},
                             {"std_error", r.std_error}, {"weight", r.weight},
                             {"partial_sum", r.partial_sum}};
    if (r.exact) {
      j["exact"] = *r.exact;
      j["exact_is_lower_bound"] = r.exact_is_lower_bound;
      j["oracle_agrees"] = r.oracle_agrees;
    }
    list.push_back(j);
  }
  if (!path_sups.empty()) {
    std::vector<double> sorted = path_sups;
    std::sort(sorted.begin(), sorted.end());
    out["path_sup_quantiles"] = pairs_json(quantiles(sorted));
  }
  if (!extra.empty()) out["extra"] = extra;
  return out;
}

std::string ConditionReport::to_csv() const {
  std::string out = "block,n,length,epsilon,threshold,hits,paths,estimate,std_error,weight,partial_sum,exact,exact_is_lower_bound\n";
  char line[640];
  for (const EstimateRow& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%lld,%lld,%.17g,%.17g,%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.block.c_str(), static_cast<long long>(r.n), static_cast<long long>(r.length), r.epsilon,
                  r.threshold, static_cast<unsigned long long>(r.hits), static_cast<unsigned long long>(r.paths),
                  r.estimate, r.std_error, r.weight, r.partial_sum, r.exact.value_or(kNaN),
                  r.exact_is_lower_bound ? 1 : 0);
    out += line;
  }
  return out;
}

const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::kWeakInvariance: return "weak-invariance";
    case Hypothesis::kLilStrict: return "lil";
    case Hypothesis::kLilBoundary: return "lil-boundary";
    case Hypothesis::kStrongLaw: return "strong-law";
    case Hypothesis::kInvarianceCounterexample: return "invariance-counterexample";
    default: return "strong-law-counterexample";
  }
}

Hypothesis parse_hypothesis(const std::string& name) {
  for (Hypothesis h : {Hypothesis::kWeakInvariance, Hypothesis::kLilStrict, Hypothesis::kLilBoundary,
                       Hypothesis::kStrongLaw, Hypothesis::kInvarianceCounterexample,
                       Hypothesis::kStrongLawCounterexample}) {
    if (name == to_string(h)) return h;
  }
  throw PreconditionError("unknown hypothesis set '" + name + "'");
}

CriteriaReport validate_hypotheses(const RationalExponents& e, Hypothesis which) {
  CriteriaReport report;
  report.subject = to_string(which);
  const Rational zero(0), one(1), two(2), half(1, 2);
  const Rational& p = e.p;
  const Rational& q = e.q;
  const Rational& r = e.r;

  auto margin_criterion = [&](const std::string& name, Rational margin, bool holds, const std::string& detail,
                              const char* verdict = nullptr) {
    Criterion c;
    c.name = name;
    c.holds = holds;
    c.value = margin.to_double();
    c.margin = margin.to_double();
    c.exact_margin = margin;
    c.detail = detail + " = " + margin.str();
    if (verdict) c.verdict = verdict;
    report.add(std::move(c));
  };
  auto range = [&](const std::string& name, bool holds, Rational margin) {
    margin_criterion(name, margin, holds, "distance to the range boundary");
  };
  auto min3 = [](Rational a, Rational b, Rational c) { return std::min({a, b, c}); };

  switch (which) {
    case Hypothesis::kWeakInvariance: {
      range("1 < p < 2", one < p && p < two, std::min(p - one, two - p));
      if (p > one) {
        const Rational rr = p / (p - one);
        const Rational lower = one - p / two;
        const Rational upper = (rr / two - one) / (rr - one);
        const Rational width = upper - lower;
        margin_criterion("alpha window 1 - p/2 <= alpha <= (r/2-1)/(r-1) at r = p/(p-1)", width,
                         width.sign() >= 0, "window width", width.sign() == 0 ? "degenerate" : nullptr);
        report.extra["coboundary_exponent"] = rr.str();
        report.extra["alpha_window"] = {lower.str(), upper.str()};
      }
      break;
    }
    case Hypothesis::kLilStrict:
    case Hypothesis::kLilBoundary: {
      range("1 < p < 2 < r", one < p && p < two && two < r, min3(p - one, two - p, r - two));
      if (r > one) {
        const Rational margin = p - r / (r - one);
        if (which == Hypothesis::kLilStrict) {
          margin_criterion("p > r/(r-1)", margin, margin.sign() > 0, "p - r/(r-1)",
                           margin.sign() == 0 ? "boundary" : nullptr);
        } else {
          margin_criterion("p = r/(r-1)", margin, margin.sign() == 0, "p - r/(r-1)",
                           margin.sign() == 0 ? "boundary" : nullptr);
        }
      }
      break;
    }
    case Hypothesis::kStrongLaw: {
      range("1 <= q < p < r < 2", one <= q && q < p && p < r && r < two,
            std::min({q - one, p - q, r - p, two - r}));
      if (r > one) {
        const Rational margin = q - (p - one) * r / (r - one);
        margin_criterion("q >= (p-1)r/(r-1)", margin, margin.sign() >= 0, "q - (p-1)r/(r-1)",
                         margin.sign() == 0 ? "boundary" : nullptr);
      }
      break;
    }
    case Hypothesis::kInvarianceCounterexample: {
      range("1 <= p < 2 <= r", one <= p && p < two && two <= r, min3(p - one, two - p, r - two));
      if (r > one) {
        const Rational margin = half * (one - p + one / (r - one));
        margin_criterion("p < r/(r-1)", margin, margin.sign() > 0, "(1/2)(1 - p + 1/(r-1))");
        report.extra["alpha_window"] = {((r - two) / (two * (r - one))).str(), (one - p / two).str()};
      }
      break;
    }
    case Hypothesis::kStrongLawCounterexample: {
      range("1 < p < 2", one < p && p < two, std::min(p - one, two - p));
      range("1 <= q < p < r", one <= q && q < p && p < r, min3(q - one, p - q, r - p));
      if (r > one && p > zero) {
        const Rational margin = p - q - (r - p) / (r - one);
        margin_criterion("q < (p-1)r/(r-1)", margin, margin.sign() > 0, "p - q - (r-p)/(r-1)");
        report.extra["beta_window"] = {((r - p) / (p * (r - one))).str(), (one - q / p).str()};
      }
      break;
    }
  }
  return report;
}

ConditionReport condition16_report(const ExperimentConfig& config) {
  config.validate();
  ExperimentConfig c = config;
  c.martingale = MartingaleKind::kNone;
  const std::size_t G = c.horizons.size();
  const std::int64_t top = c.horizons.back();
  const auto paths = static_cast<std::size_t>(c.paths);

  // running max_{1<=k<=n} |g o T^k| at every horizon, per path
  std::vector<double> maxima(paths * G);
  parallel_chunks(paths, c.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      const PathData d = sample_path(c, path, top);
      double running = 0.0;
      std::size_t h = 0;
      for (std::int64_t k = 1; k <= top && h < G; ++k) {
        running = std::max(running, std::abs(d.g[static_cast<std::size_t>(k)]));
        if (k == c.horizons[h]) maxima[path * G + h++] = running;
      }
    }
  });

  ConditionReport report;
  report.condition = "max_{1<=k<=n} |g o T^k| / sqrt(n) -> 0 in probability";
  report.decision_rule =
      "holds if estimates decrease strictly across horizons and the last is at most half the first "
      "(or all are 0); fails if the last is at least half the first and exceeds 3 standard errors; "
      "otherwise inconclusive";
  report.config = c.to_json();
  const bool tower = c.transfer.kind == TransferKind::kTower;
  const bool single_tower = tower && c.transfer.tower->terms.size() == 1;
  for (double eps : c.epsilons) {
    std::vector<double> est, se;
    for (std::size_t h = 0; h < G; ++h) {
      const std::int64_t n = c.horizons[h];
      EstimateRow row;
      row.block = "n=" + std::to_string(n);
      row.n = n;
      row.length = n;
      row.epsilon = eps;
      row.threshold = eps * std::sqrt(static_cast<double>(n));
      row.paths = paths;
      for (std::size_t path = 0; path < paths; ++path) row.hits += maxima[path * G + h] > row.threshold ? 1 : 0;
      finish_row(row);
      if (c.transfer.sup_norm() <= row.threshold) {
        attach_oracle(row, 0.0, false);
      } else if (tower) {
        const cex::TowerBound b = cex::orbit_max_lower_bound(*c.transfer.tower, 1, n, row.threshold);
        attach_oracle(row, b.probability.to_double(), !single_tower);
      }
      est.push_back(row.estimate);
      se.push_back(row.std_error);
      report.rows.push_back(row);
    }
    Verdict v = Verdict::kInconclusive;
    const bool all_zero = std::all_of(est.begin(), est.end(), [](double x) { return x == 0.0; });
    bool decreasing = true;
    for (std::size_t h = 1; h < G; ++h) decreasing = decreasing && est[h] < est[h - 1];
    if (all_zero || (G >= 2 && decreasing && est.back() <= est.front() / 2.0)) {
      v = Verdict::kHolds;
    } else if (G >= 2 && est.back() >= est.front() / 2.0 && est.back() > 3.0 * se.back()) {
      v = Verdict::kFails;
    }
    report.verdicts.emplace_back(eps, v);
  }
  return report;
}

ConditionReport condition17_report(const ExperimentConfig& config) {
  config.validate();
  ExperimentConfig c = config;
  c.martingale = MartingaleKind::kNone;
  const double alpha = c.alpha.value_or(0.5);
  require(alpha > 0.0 && alpha < 1.0, "block exponent alpha must lie in (0, 1)");
  const std::int64_t n0 = std::max<std::int64_t>(16, c.horizons.front());
  const std::int64_t top = c.horizons.back();
  require(top > n0, "largest horizon must exceed max(16, first horizon)");

  struct Block {
    std::string kind;
    std::int64_t start;
    std::int64_t length;  // indices start .. start + length
    double scale;         // sqrt(m log log m)
    int group;            // dyadic octave of the start
  };
  std::vector<Block> blocks;
  {
    std::int64_t m = 0;
    for (std::int64_t j = 1;; ++j) {
      const auto len = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(j), alpha)));
      if (m >= n0) {
        if (m + len > top) break;
        blocks.push_back({"m_j", m, len, std::sqrt(static_cast<double>(m) * log_log(static_cast<double>(m))),
                          static_cast<int>(std::floor(std::log2(static_cast<double>(m))))});
      }
      m += len;
    }
    for (int a = 0; a < 62; ++a) {
      const std::int64_t s = std::int64_t{1} << a;
      if (s < n0) continue;
      if (2 * s > top) break;
      blocks.push_back({"dyadic", s, s, std::sqrt(static_cast<double>(s) * log_log(static_cast<double>(s))), a});
    }
  }
  const std::size_t E = c.epsilons.size();
  const std::size_t nb = blocks.size();
  const auto paths = static_cast<std::size_t>(c.paths);

  // per path: max over each block of |g o T^k|, then thresholded; plus the window sup
  std::vector<std::uint8_t> hit(paths * nb * E);
  std::vector<double> sups(paths);
  parallel_chunks(paths, c.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      const PathData d = sample_path(c, path, top);
      double sup = 0.0;
      for (std::int64_t n = n0; n <= top; ++n) {
        const double nn = static_cast<double>(n);
        sup = std::max(sup, std::abs(d.g[static_cast<std::size_t>(n)]) / std::sqrt(nn * log_log(nn)));
      }
      sups[path] = sup;
      for (std::size_t b = 0; b < nb; ++b) {
        double mx = 0.0;
        for (std::int64_t i = 0; i <= blocks[b].length; ++i) {
          mx = std::max(mx, std::abs(d.g[static_cast<std::size_t>(blocks[b].start + i)]));
        }
        for (std::size_t e = 0; e < E; ++e) {
          hit[(path * nb + b) * E + e] = mx / blocks[b].scale > c.epsilons[e] ? 1 : 0;
        }
      }
    }
  });

  ConditionReport report;
  report.condition = "g o T^n / sqrt(n log log n) -> 0 almost surely (block reduction)";
  report.decision_rule = std::string("Borel-Cantelli partial sums of block probabilities grouped by dyadic octave of "
                                     "the block start (m_j blocks); ") + kSeriesRule;
  report.config = c.to_json();
  report.path_sups = sups;
  const bool tower = c.transfer.kind == TransferKind::kTower;
  for (std::size_t e = 0; e < E; ++e) {
    const double eps = c.epsilons[e];
    EstimateRow window;
    window.block = "window";
    window.n = n0;
    window.length = top - n0;
    window.epsilon = eps;
    window.threshold = eps;
    window.paths = paths;
    for (double s : sups) window.hits += s > eps ? 1 : 0;
    finish_row(window);
    report.rows.push_back(window);

    double partial[2] = {0.0, 0.0};
    std::vector<double> increments;
    int current_group = -1;
    for (std::size_t b = 0; b < nb; ++b) {
      const Block& blk = blocks[b];
      EstimateRow row;
      row.block = blk.kind;
      row.n = blk.start;
      row.length = blk.length;
      row.epsilon = eps;
      row.threshold = eps * blk.scale;
      row.paths = paths;
      for (std::size_t path = 0; path < paths; ++path) row.hits += hit[(path * nb + b) * E + e];
      finish_row(row);
      const int slot = blk.kind == "dyadic" ? 1 : 0;
      partial[slot] += row.estimate;
      row.partial_sum = partial[slot];
      if (c.transfer.sup_norm() <= row.threshold) {
        attach_oracle(row, 0.0, false);
      } else if (tower) {
        const cex::TowerBound bound =
            cex::orbit_max_lower_bound(*c.transfer.tower, blk.start, blk.start + blk.length, row.threshold);
        attach_oracle(row, bound.probability.to_double(), true);
      }
      if (slot == 0) {
        if (blk.group != current_group) {
          increments.push_back(0.0);
          current_group = blk.group;
        }
        increments.back() += row.estimate;
      }
      report.rows.push_back(row);
    }
    report.verdicts.emplace_back(eps, series_verdict(increments));
  }
  return report;
}

ConditionReport slln_report(const ExperimentConfig& config) {
  config.validate();
  const ExperimentConfig& c = config;
  const double alpha = c.alpha.value_or(1.0 / c.p);
  require(alpha >= 1.0 / c.p - 1e-15 && alpha <= 1.0, "alpha must lie in [1/p, 1]");
  const std::size_t G = c.horizons.size();
  const std::int64_t top = c.horizons.back();
  const auto paths = static_cast<std::size_t>(c.paths);

  std::vector<double> maxima(paths * G);
  parallel_chunks(paths, c.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      const PathData d = sample_path(c, path, top);
      double s = 0.0;
      double running = 0.0;
      std::size_t h = 0;
      for (std::int64_t k = 1; k <= top && h < G; ++k) {
        s += d.f(static_cast<std::size_t>(k - 1));
        running = std::max(running, std::abs(s));
        if (k == c.horizons[h]) maxima[path * G + h++] = running;
      }
    }
  });

  ConditionReport report;
  report.condition = "sum_n n^{alpha p - 2} mu{max_{k<=n} |S_k(f)| >= eps n^alpha} < infinity";
  report.decision_rule = std::string("series increments grouped by decade of the horizon, each horizon weighted by "
                                     "the exact sum of n^{alpha p - 2} over the integers it represents; ") + kSeriesRule;
  report.config = c.to_json();
  report.extra["alpha"] = alpha;

  // weight of horizon h: sum of n^{alpha p - 2} over (n_{h-1}, n_h], compensated
  std::vector<double> weights(G);
  for (std::size_t h = 0; h < G; ++h) {
    const std::int64_t from = h == 0 ? 1 : c.horizons[h - 1] + 1;
    long double sum = 0.0L, comp = 0.0L;
    for (std::int64_t n = from; n <= c.horizons[h]; ++n) {
      const long double term = std::pow(static_cast<long double>(n), static_cast<long double>(alpha * c.p - 2.0));
      const long double y = term - comp;
      const long double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    weights[h] = static_cast<double>(sum);
  }
  for (double eps : c.epsilons) {
    double partial = 0.0;
    std::vector<double> increments;
    int current = -1;
    for (std::size_t h = 0; h < G; ++h) {
      const std::int64_t n = c.horizons[h];
      EstimateRow row;
      row.block = "n=" + std::to_string(n);
      row.n = n;
      row.length = n;
      row.epsilon = eps;
      row.threshold = eps * std::pow(static_cast<double>(n), alpha);
      row.paths = paths;
      for (std::size_t path = 0; path < paths; ++path) row.hits += maxima[path * G + h] >= row.threshold ? 1 : 0;
      finish_row(row);
      row.weight = weights[h];
      partial += row.weight * row.estimate;
      row.partial_sum = partial;
      const int decade = static_cast<int>(std::floor(std::log10(static_cast<double>(n))));
      if (decade != current) {
        increments.push_back(0.0);
        current = decade;
      }
      increments.back() += row.weight * row.estimate;
      report.rows.push_back(row);
    }
    report.verdicts.emplace_back(eps, series_verdict(increments));
  }
  if (c.transfer.kind == TransferKind::kTower && c.transfer.tower->kind == cex::Kind::kStrongLaw) {
    auto& ev = report.extra["tower_events"] = nlohmann::ordered_json::array();
    for (const cex::TowerTerm& t : c.transfer.tower->terms) {
      if (t.i + 1 >= 63) break;
      const Rational pr = cex::slln_event_probability(*c.transfer.tower, t.i, std::int64_t{1} << t.i,
                                                      std::int64_t{1} << (t.i + 1));
      ev.push_back({{"i", t.i}, {"probability", pr.str()}});
    }
  }
  return report;
}

double ks_distance_to_normal(std::vector<double> samples) {
  require(!samples.empty(), "KS distance needs samples");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-samples[i] / std::numbers::sqrt2);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

nlohmann::ordered_json CltReport::to_json() const {
  nlohmann::ordered_json out;
  out["config"] = config;
  out["code_version"] = kCodeVersion;
  out["n"] = n;
  out["paths"] = paths;
  out["sigma"] = sigma;
  out["sigma_known"] = sigma_known;
  out["ks_distance"] = ks_distance;
  out["sup_quantiles"] = pairs_json(sup_quantiles);
  out["lil_quantiles"] = pairs_json(lil_quantiles);
  out["lil_mean"] = lil_mean;
  if (baseline_ks_distance) {
    out["baseline_ks_distance"] = *baseline_ks_distance;
    out["max_perturbation"] = max_perturbation;
    out["max_telescoping_excess"] = max_telescoping_excess;
  }
  return out;
}

CltReport clt_lil_report(const ExperimentConfig& config) {
  config.validate();
  const ExperimentConfig& c = config;
  const std::int64_t n = c.horizons.back();
  const std::int64_t lil_from =
      std::max<std::int64_t>(16, c.horizons.size() >= 2 ? c.horizons[c.horizons.size() - 2] : n / 2);
  const auto paths = static_cast<std::size_t>(c.paths);
  const bool paired = c.martingale == MartingaleKind::kRademacher && c.transfer.kind != TransferKind::kNone;

  std::vector<double> sn(paths), sm(paths), sup(paths), lil(paths), excess(paths);
  parallel_chunks(paths, c.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      const PathData d = sample_path(c, path, n);
      double s = 0.0, m = 0.0, mx = 0.0, best = -std::numeric_limits<double>::infinity();
      for (std::int64_t k = 1; k <= n; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        s += d.f(idx);
        if (!d.m.empty()) m += d.m[idx];
        mx = std::max(mx, std::abs(s));
        if (k >= lil_from) {
          const double kk = static_cast<double>(k);
          best = std::max(best, s / std::sqrt(2.0 * kk * log_log(kk)));
        }
      }
      sn[path] = s;
      sm[path] = m;
      sup[path] = mx;
      lil[path] = best;
      excess[path] = std::abs(s - m) - (std::abs(d.g.front()) + std::abs(d.g.back()));
    }
  });

  CltReport report;
  report.config = c.to_json();
  report.n = n;
  report.paths = paths;
  const double root_n = std::sqrt(static_cast<double>(n));
  if (c.martingale == MartingaleKind::kRademacher) {
    report.sigma = 1.0;
    report.sigma_known = true;
  } else {
    long double mean = 0.0L;
    for (double s : sn) mean += s / root_n;
    mean /= static_cast<long double>(paths);
    long double var = 0.0L;
    for (double s : sn) var += (s / root_n - mean) * (s / root_n - mean);
    var /= static_cast<long double>(paths - 1);
    report.sigma = static_cast<double>(std::sqrt(var));
    report.sigma_known = false;
  }
  if (!(report.sigma >= 1e-9)) {
    throw PreconditionError("degenerate f: variance estimate " + std::to_string(report.sigma) + " below 1e-9");
  }
  const double scale = report.sigma * root_n;
  report.scaled_sums.resize(paths);
  std::vector<double> sup_scaled(paths), lil_scaled(paths);
  for (std::size_t path = 0; path < paths; ++path) {
    report.scaled_sums[path] = sn[path] / scale;
    sup_scaled[path] = sup[path] / scale;
    lil_scaled[path] = lil[path] / report.sigma;
  }
  report.ks_distance = ks_distance_to_normal(report.scaled_sums);
  report.sup_quantiles = quantiles(sup_scaled);
  report.lil_quantiles = quantiles(lil_scaled);
  long double mean = 0.0L;
  for (double v : lil_scaled) mean += v;
  report.lil_mean = static_cast<double>(mean / static_cast<long double>(paths));
  if (paired) {
    std::vector<double> base(paths);
    for (std::size_t path = 0; path < paths; ++path) {
      base[path] = sm[path] / root_n;
      report.max_perturbation = std::max(report.max_perturbation, std::abs(sn[path] - sm[path]) / root_n);
      report.max_telescoping_excess = std::max(report.max_telescoping_excess, excess[path]);
    }
    report.baseline_ks_distance = ks_distance_to_normal(base);
  }
  return report;
}

}  // namespace cobound::mc
