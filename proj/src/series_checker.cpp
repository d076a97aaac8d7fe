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

#include "cobound/series_checker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "cobound/error.hpp"

namespace cobound::series {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Compensated {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr const char* kCondensationRule =
    "Cauchy condensation: b_j = 2^j a_{2^j} for 2^j in [1e3, K_max]; least-squares fit "
    "log b_j = c + lambda j + s log j; diverges if lambda > 1e-3, converges if lambda < -1e-3, "
    "otherwise converges if s < -1.1, diverges if s > -0.9, else inconclusive";

// returns (lambda, s) of the fit log b = c + lambda j + s log j
std::pair<double, double> fit_condensed(const std::vector<double>& j, const std::vector<double>& y) {
  double a[3][4] = {};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double row[3] = {1.0, j[i], std::log(j[i])};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += row[r] * row[c];
      a[r][3] += row[r] * y[i];
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double m = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= m * a[c][k];
    }
  }
  return {a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

SeriesVerdict condensation(const std::function<double(std::int64_t)>& log_term, std::int64_t k_max) {
  std::vector<double> x, y;
  for (int j = 10; j < 62 && (std::int64_t{1} << j) <= k_max; ++j) {
    x.push_back(static_cast<double>(j));
    y.push_back(j * kLn2 + log_term(std::int64_t{1} << j));
  }
  SeriesVerdict v;
  v.rule = kCondensationRule;
  if (x.size() < 4) {
    v.verdict = "inconclusive";
    return v;
  }
  const auto [lambda, s] = fit_condensed(x, y);
  v.statistic = s;
  v.growth_rate = lambda;
  if (lambda > 1e-3) {
    v.verdict = "diverges";
  } else if (lambda < -1e-3) {
    v.verdict = "converges";
  } else {
    v.verdict = s < -1.1 ? "converges" : (s > -0.9 ? "diverges" : "inconclusive");
  }
  return v;
}

nlohmann::ordered_json verdict_json(const SeriesVerdict& v) {
  return {{"verdict", v.verdict}, {"statistic", v.statistic}, {"growth_rate", v.growth_rate}, {"rule", v.rule}};
}

}  // namespace

SequenceFamily SequenceFamily::example(double p) {
  require(p > 1.0 && p < 2.0, "p must lie in (1, 2)");
  SequenceFamily f;
  f.name = "example";
  f.p = p;
  f.k_start = 10;
  f.log_theta = [p](std::int64_t k) {
    const double kk = static_cast<double>(k);
    return kk * (p - 1.0) / p * kLn2 - (2.0 / p) * std::log(std::log(kk));
  };
  f.log_n = [p](std::int64_t k) {
    const double kk = static_cast<double>(k);
    const double x = 2.0 * kk * (2.0 - p) / p * kLn2 - (2.0 / p) * std::log(kk);
    // ceiling matters only while the value is small
    return x < 36.0 ? std::log(std::ceil(std::exp(x))) : x;
  };
  f.log_rho = [](std::int64_t k) { return -static_cast<double>(k) * kLn2; };
  f.log_rho_tail = [](std::int64_t k) { return (1.0 - static_cast<double>(k)) * kLn2; };
  f.log_reference = [](std::int64_t k) {
    const double kk = static_cast<double>(k);
    return -std::log(kk) - 2.0 * std::log(std::log(kk));
  };
  return f;
}

SequenceFamily SequenceFamily::scaled_theta(double factor) const {
  require(factor > 0.0, "scale factor must be positive");
  SequenceFamily f = *this;
  auto base = log_theta;
  const double shift = std::log(factor);
  f.log_theta = [base, shift](std::int64_t k) { return base(k) + shift; };
  f.name = name + "*" + std::to_string(factor);
  f.log_reference = nullptr;
  return f;
}

nlohmann::ordered_json Prop23Report::to_json() const {
  nlohmann::ordered_json out;
  out["family"] = family;
  out["p"] = p;
  out["k_max"] = k_max;
  auto& cps = out["checkpoints"] = nlohmann::ordered_json::array();
  for (const Checkpoint& c : checkpoints) {
    cps.push_back({{"k", c.k},
                   {"sum_main", c.sum_main},
                   {"sum_quadratic", c.sum_quadratic},
                   {"tail_quantity", c.tail_quantity},
                   {"sum_eps", c.sum_eps}});
  }
  out["main_series"] = verdict_json(main);
  out["tail_limit"] = verdict_json(tail);
  out["quadratic_series"] = verdict_json(quadratic);
  if (!eps.verdict.empty()) out["eps_series"] = verdict_json(eps);
  out["max_reference_ratio"] = max_reference_ratio;
  out["quadratic_growth"] = quadratic_growth;
  out["tail_ratio"] = tail_ratio;
  out["report"] = report.to_json();
  return out;
}

Prop23Report prop23_report(const SequenceFamily& f, std::int64_t k_max, const Prop23Options& options) {
  require(k_max >= 1000, "K_max must be at least 1000");
  require(f.k_start >= 1 && f.k_start < 1000, "k_start must lie in [1, 1000)");
  require(f.p > 1.0 && f.p < 2.0, "p must lie in (1, 2)");
  require(f.log_theta && f.log_n && f.log_rho, "family needs theta, N and rho");
  const double p = f.p;

  std::vector<std::int64_t> marks;
  for (std::int64_t k : {std::int64_t{1000}, std::int64_t{10000}, std::int64_t{100000}, k_max}) {
    if (k <= k_max && (marks.empty() || k > marks.back())) marks.push_back(k);
  }

  // suffix sums of rho when no closed form is given (truncated at K_max + 1)
  std::vector<double> rho_suffix;
  if (!f.log_rho_tail) {
    rho_suffix.assign(static_cast<std::size_t>(k_max - f.k_start + 2), 0.0);
    for (std::int64_t k = k_max; k >= f.k_start; --k) {
      const auto idx = static_cast<std::size_t>(k - f.k_start);
      rho_suffix[idx] = rho_suffix[idx + 1] + std::exp(f.log_rho(k));
    }
  }
  auto log_tail = [&](std::int64_t k) {
    if (f.log_rho_tail) return f.log_rho_tail(k);
    return std::log(rho_suffix[static_cast<std::size_t>(k - f.k_start)]);
  };

  Prop23Report rep;
  rep.family = f.name;
  rep.p = p;
  rep.k_max = k_max;
  Compensated main, quad, eps, rho;
  double prev_theta = -INFINITY, prev_n = -INFINITY, prev_rho = INFINITY;
  std::size_t next_mark = 0;
  for (std::int64_t k = f.k_start; k <= k_max; ++k) {
    const double lt = f.log_theta(k), ln = f.log_n(k), lr = f.log_rho(k);
    if (!(lt > prev_theta)) throw PreconditionError("theta_k is not increasing at k = " + std::to_string(k));
    if (!(ln >= prev_n) || ln < 0.0) {
      throw PreconditionError("N_k is not a non-decreasing positive sequence at k = " + std::to_string(k));
    }
    if (!(lr < prev_rho) || lr >= 0.0) throw PreconditionError("rho_k is not decreasing in (0,1) at k = " + std::to_string(k));
    prev_theta = lt;
    prev_n = ln;
    prev_rho = lr;
    rho.add(std::exp(lr));
    if (rho.value() >= 1.0) throw PreconditionError("partial sums of rho_k reach 1 at k = " + std::to_string(k));

    const double log_main = p * lt + 0.5 * p * ln + lr;
    main.add(std::exp(log_main));
    quad.add(std::exp(2.0 * lt + 0.5 * ln + lr));
    if (f.log_eps) eps.add(std::exp(lt + ln + f.log_eps(k) / p));
    if (f.log_reference && k >= 1000) {
      const double r = std::exp(log_main - f.log_reference(k));
      rep.max_reference_ratio = std::max({rep.max_reference_ratio, r, 1.0 / r});
    }
    if (next_mark < marks.size() && k == marks[next_mark]) {
      Checkpoint c;
      c.k = k;
      c.sum_main = main.value();
      c.sum_quadratic = quad.value();
      c.sum_eps = eps.value();
      c.tail_quantity = std::exp(p / (p - 1.0) * f.log_theta(k + 1) + log_tail(k));
      rep.checkpoints.push_back(c);
      ++next_mark;
    }
  }

  rep.main = condensation([&](std::int64_t k) { return p * f.log_theta(k) + 0.5 * p * f.log_n(k) + f.log_rho(k); },
                          k_max);
  rep.quadratic =
      condensation([&](std::int64_t k) { return 2.0 * f.log_theta(k) + 0.5 * f.log_n(k) + f.log_rho(k); }, k_max);
  if (f.log_eps) {
    rep.eps = condensation([&](std::int64_t k) { return f.log_theta(k) + f.log_n(k) + f.log_eps(k) / p; }, k_max);
  }
  {
    std::vector<double> x, y;
    bool decreasing = true;
    for (std::size_t j = 0; j < rep.checkpoints.size(); ++j) {
      x.push_back(std::log(std::log(static_cast<double>(rep.checkpoints[j].k))));
      y.push_back(std::log(rep.checkpoints[j].tail_quantity));
      if (j > 0) decreasing = decreasing && rep.checkpoints[j].tail_quantity < rep.checkpoints[j - 1].tail_quantity;
    }
    rep.tail.rule = "strictly decreasing across checkpoints with negative slope of log value against log log k";
    rep.tail.statistic = x.size() >= 2 ? slope(x, y) : 0.0;
    rep.tail.verdict = x.size() >= 2 && decreasing && rep.tail.statistic < 0.0 ? "tends to 0" : "inconclusive";
  }
  const Checkpoint& first = rep.checkpoints.front();
  const Checkpoint& last = rep.checkpoints.back();
  rep.quadratic_growth = last.sum_quadratic / first.sum_quadratic;
  rep.tail_ratio = last.tail_quantity / first.tail_quantity;

  CriteriaReport& r = rep.report;
  char subject[96];
  std::snprintf(subject, sizeof(subject), "%s p=%g K_max=%lld", f.name.c_str(), p, static_cast<long long>(k_max));
  r.subject = subject;
  auto verdict = [&](const char* name, const SeriesVerdict& v, const char* wanted) {
    Criterion c;
    c.name = name;
    c.holds = v.verdict == wanted;
    c.value = v.statistic;
    c.verdict = v.verdict;
    c.detail = v.rule;
    r.add(std::move(c));
  };
  verdict("sum theta^p N^{p/2} rho converges", rep.main, "converges");
  verdict("theta_{k+1}^{p/(p-1)} sum_{i>=k} rho_i tends to 0", rep.tail, "tends to 0");
  verdict("sum theta^2 sqrt(N) rho diverges", rep.quadratic, "diverges");
  if (f.log_eps) verdict("sum theta N eps^{1/p} converges", rep.eps, "converges");

  auto diagnostic = [&](const char* name, double value, double bound, bool holds) {
    r.extra["diagnostics"].push_back({{"name", name}, {"value", value}, {"bound", bound}, {"holds", holds}});
  };
  diagnostic("quadratic partial-sum growth S(K_max)/S(1e3)", rep.quadratic_growth, options.growth_threshold,
             rep.quadratic_growth >= options.growth_threshold);
  diagnostic("tail quantity ratio K_max vs 1e3", rep.tail_ratio, options.tail_drop, rep.tail_ratio <= options.tail_drop);
  if (f.log_reference) {
    diagnostic("main increments vs reference, worst factor", rep.max_reference_ratio, options.reference_factor,
               rep.max_reference_ratio <= options.reference_factor);
  }
  return rep;
}

}  // namespace cobound::series
