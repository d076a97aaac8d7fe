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

#include "cobound/bernoulli_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "cobound/error.hpp"

namespace cobound::bern {

namespace {

constexpr int kMaxSummandBits = 30;

quad::QuadratureOptions tight() {
  quad::QuadratureOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-11;
  o.max_evaluations = 1'000'000;
  return o;
}

QuadratureResult checked(QuadratureResult r, const std::string& what) {
  if (!r.converged) {
    throw ConvergenceError(what + " did not converge; achieved error " + std::to_string(r.error), r.error);
  }
  return r;
}

double mean_of(const FunctionOnUnitInterval& f) {
  if (f.centered) return 0.0;
  if (f.mean) return *f.mean;
  return mean_value(f).value;
}

std::vector<double> geometric_points(double scale, int count) {
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(std::ldexp(scale, -k));
  return out;
}

double sum_conditional(const FunctionOnUnitInterval& f, int n, double x, double mean) {
  const std::uint64_t count = std::uint64_t{1} << n;
  const double inv = std::ldexp(1.0, -n);
  long double sum = 0.0L, comp = 0.0L;
  for (std::uint64_t j = 0; j < count; ++j) {
    const long double y = static_cast<long double>(f((x + static_cast<double>(j)) * inv)) - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return static_cast<double>(sum * static_cast<long double>(inv)) - mean;
}

// D(u) = int_0^{1-u} |f(x+u) - f(x)|^q dx
QuadratureResult shifted_difference(const FunctionOnUnitInterval& f, double u, double q,
                                    const quad::QuadratureOptions& options) {
  std::vector<double> cuts;
  for (double c : f.jumps) {
    cuts.push_back(c);
    cuts.push_back(c - u);
  }
  if (f.singular_at_zero) {
    for (int k = 0; k < 50; ++k) cuts.push_back(std::ldexp(u, k));
    for (double x : geometric_points(u, 20)) cuts.push_back(x);
  }
  return quad::integrate([&](double x) { return std::pow(std::abs(f(x + u) - f(x)), q); }, 0.0, 1.0 - u, cuts,
                         options);
}

// 2 int_{lo}^{hi} weight(u) D(u) du, with the largest inner error folded into the estimate
QuadratureResult weighted_energy(const FunctionOnUnitInterval& f, double lo, double hi, double q,
                                 const std::function<double(double)>& weight, const quad::QuadratureOptions& options) {
  double worst_inner = 0.0;
  bool inner_ok = true;
  std::vector<double> cuts;
  for (double c : f.jumps) {
    cuts.push_back(c);
    cuts.push_back(1.0 - c);
    for (double d : f.jumps) {
      if (d > c) cuts.push_back(d - c);
    }
  }
  if (f.singular_at_zero) {
    for (double x : geometric_points(hi, 30)) cuts.push_back(x);
  }
  QuadratureResult outer = quad::integrate(
      [&](double u) {
        const QuadratureResult inner = shifted_difference(f, u, q, options);
        inner_ok = inner_ok && inner.converged;
        const double wu = weight(u);
        worst_inner = std::max(worst_inner, inner.error * wu);
        return wu * inner.value;
      },
      lo, hi, cuts, options);
  outer.value *= 2.0;
  outer.error = 2.0 * (outer.error + worst_inner * (hi - lo));
  outer.converged = outer.converged && inner_ok;
  return outer;
}

}  // namespace

FunctionOnUnitInterval FunctionOnUnitInterval::constant(double c) {
  FunctionOnUnitInterval f;
  f.name = "constant";
  f.eval = [c](double) { return c; };
  f.centered = c == 0.0;
  f.mean = c;
  f.holder_exponent = 1.0;
  return f;
}

FunctionOnUnitInterval FunctionOnUnitInterval::affine(double slope, double intercept) {
  FunctionOnUnitInterval f;
  f.name = "affine";
  f.eval = [slope, intercept](double x) { return slope * x + intercept; };
  f.mean = slope / 2.0 + intercept;
  f.centered = std::abs(*f.mean) <= 1e-15;
  f.holder_exponent = 1.0;
  return f;
}

FunctionOnUnitInterval FunctionOnUnitInterval::cosine(int frequency, double amplitude) {
  require(frequency >= 1, "cosine frequency must be at least 1");
  FunctionOnUnitInterval f;
  f.name = "cosine";
  const double w = 2.0 * std::numbers::pi * frequency;
  f.eval = [w, amplitude](double x) { return amplitude * std::cos(w * x); };
  f.centered = true;
  f.mean = 0.0;
  f.holder_exponent = 1.0;
  return f;
}

FunctionOnUnitInterval FunctionOnUnitInterval::indicator_step(double c, bool centered) {
  require(c > 0.0 && c < 1.0, "step location must lie in (0, 1)");
  FunctionOnUnitInterval f;
  f.name = "indicator-step";
  const double shift = centered ? c : 0.0;
  f.eval = [c, shift](double x) { return (x <= c ? 1.0 : 0.0) - shift; };
  f.centered = centered;
  f.mean = c - shift;
  f.jumps = {c};
  f.holder_exponent = 0.0;
  return f;
}

FunctionOnUnitInterval FunctionOnUnitInterval::weierstrass(double a, int b, int terms) {
  require(a > 0.0 && a < 1.0, "Weierstrass amplitude ratio must lie in (0, 1)");
  require(b >= 2 && terms >= 1 && terms <= 30, "Weierstrass needs integer b >= 2 and 1..30 terms");
  FunctionOnUnitInterval f;
  f.name = "weierstrass";
  f.eval = [a, b, terms](double x) {
    double sum = 0.0, amp = 1.0, freq = 1.0;
    for (int k = 0; k < terms; ++k) {
      sum += amp * std::cos(2.0 * std::numbers::pi * std::fmod(freq * x, 1.0));
      amp *= a;
      freq *= b;
    }
    return sum;
  };
  f.centered = true;
  f.mean = 0.0;
  f.holder_exponent = std::min(1.0, std::log(1.0 / a) / std::log(static_cast<double>(b)));
  return f;
}

FunctionOnUnitInterval FunctionOnUnitInterval::power(double s) {
  require(s > 0.0 && s < 1.0, "power exponent must lie in (0, 1)");
  FunctionOnUnitInterval f;
  f.name = "power";
  const double centre = 1.0 / (1.0 - s);
  f.eval = [s, centre](double x) { return std::pow(std::max(x, 1e-300), -s) - centre; };
  f.centered = true;
  f.mean = 0.0;
  f.singular_at_zero = true;
  f.integrability = 1.0 / s;
  return f;
}

FunctionOnUnitInterval FunctionOnUnitInterval::log_singular(double s, double w) {
  require(s > 0.0 && s < 1.0 && w >= 0.0, "log-singular needs 0 < s < 1 and w >= 0");
  FunctionOnUnitInterval f;
  f.name = "log-singular";
  f.eval = [s, w](double x) {
    const double y = std::max(x, 1e-300);
    return std::pow(y, -s) * std::pow(1.0 - std::log(y), -w);
  };
  f.centered = false;
  f.singular_at_zero = true;
  f.integrability = 1.0 / s;
  return f;
}

QuadratureResult mean_value(const FunctionOnUnitInterval& f) {
  if (f.mean) return {*f.mean, 0.0, 0, 0, true};
  std::vector<double> cuts = f.jumps;
  if (f.singular_at_zero) {
    for (double x : geometric_points(1.0, 60)) cuts.push_back(x);
  }
  return checked(quad::integrate(f.eval, 0.0, 1.0, cuts, tight()), "mean of " + f.name);
}

void check_centering(const FunctionOnUnitInterval& f) {
  if (!f.centered) return;
  FunctionOnUnitInterval g = f;
  g.mean.reset();
  const double m = mean_value(g).value;
  require(std::abs(m) <= 1e-8, f.name + " is flagged centered but integrates to " + std::to_string(m));
}

FunctionOnUnitInterval ftilde(const FunctionOnUnitInterval& f) {
  FunctionOnUnitInterval out;
  out.name = "tilde(" + f.name + ")";
  auto base = f.eval;
  out.eval = [base](double x) { return base(x) - 0.5 * base(0.5 * x) - 0.5 * base(0.5 * (x + 1.0)); };
  // int f~ = int f - int_0^1 f: always centered.
  out.centered = true;
  out.mean = 0.0;
  for (double c : f.jumps) {
    for (double x : {c, 2.0 * c, 2.0 * c - 1.0}) {
      if (x > 0.0 && x < 1.0) out.jumps.push_back(x);
    }
  }
  std::sort(out.jumps.begin(), out.jumps.end());
  out.jumps.erase(std::unique(out.jumps.begin(), out.jumps.end()), out.jumps.end());
  out.singular_at_zero = f.singular_at_zero;
  out.integrability = f.integrability;
  out.holder_exponent = f.holder_exponent;
  return out;
}

FunctionOnUnitInterval doubling_average(const FunctionOnUnitInterval& h) {
  FunctionOnUnitInterval out;
  out.name = "average(" + h.name + ")";
  auto base = h.eval;
  out.eval = [base](double x) { return 0.5 * base(0.5 * x) + 0.5 * base(0.5 * (x + 1.0)); };
  out.centered = h.centered;
  out.mean = h.mean;
  for (double c : h.jumps) {
    for (double x : {2.0 * c, 2.0 * c - 1.0}) {
      if (x > 0.0 && x < 1.0) out.jumps.push_back(x);
    }
  }
  std::sort(out.jumps.begin(), out.jumps.end());
  out.jumps.erase(std::unique(out.jumps.begin(), out.jumps.end()), out.jumps.end());
  out.singular_at_zero = h.singular_at_zero;
  out.integrability = h.integrability;
  return out;
}

double conditional_expectation(const FunctionOnUnitInterval& f, int n, double x) {
  if (n > kMaxSummandBits) throw ResourceLimitError("conditional expectation needs 2^n summands; n must be at most 30");
  require(n >= 1, "n must be at least 1");
  require(x >= 0.0 && x <= 1.0, "x must lie in [0, 1]");
  return sum_conditional(f, n, x, mean_of(f));
}

std::vector<double> conditional_expectation_breaks(const FunctionOnUnitInterval& f, int n) {
  std::vector<double> out;
  for (double c : f.jumps) {
    const double y = std::ldexp(c, n);
    const double frac = y - std::floor(y);
    if (frac > 0.0) out.push_back(frac);
  }
  if (f.singular_at_zero) {
    for (double x : geometric_points(1.0, 60)) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadratureResult conditional_norm_power(const FunctionOnUnitInterval& f, int n, double q,
                                        const quad::QuadratureOptions& options) {
  if (n > 20) throw ResourceLimitError("norm of the conditional expectation limited to n <= 20");
  require(n >= 1 && q >= 1.0, "need n >= 1 and q >= 1");
  const double mean = mean_of(f);
  const std::vector<double> cuts = conditional_expectation_breaks(f, n);
  return quad::integrate([&](double x) { return std::pow(std::abs(sum_conditional(f, n, x, mean)), q); }, 0.0, 1.0,
                         cuts, options);
}

QuadratureResult local_difference_energy(const FunctionOnUnitInterval& f, int n, double q,
                                         const quad::QuadratureOptions& options) {
  require(n >= 0 && n <= 60 && q >= 1.0, "need 0 <= n <= 60 and q >= 1");
  const double h = std::ldexp(1.0, -n);
  QuadratureResult r = weighted_energy(f, 0.0, h, q, [](double) { return 1.0; }, options);
  r.value = std::ldexp(r.value, n);
  r.error = std::ldexp(r.error, n);
  return r;
}

Lemma32Result lemma32_check(const FunctionOnUnitInterval& f, int n, double q) {
  require(q > 1.0, "q must exceed 1");
  if (n > 20) throw ResourceLimitError("n must be at most 20");
  require(n >= 1, "n must be at least 1");
  const quad::QuadratureOptions o = tight();
  const FunctionOnUnitInterval ft = ftilde(f);
  Lemma32Result out;
  out.n = n;
  out.q = q;
  out.lhs = checked(conditional_norm_power(f, n, q, o), "conditional-expectation norm");
  out.rhs = checked(local_difference_energy(f, n, q, o), "local difference energy");
  out.lhs_coboundary = checked(conditional_norm_power(ft, n, q, o), "coboundary conditional norm");
  out.rhs_coboundary = checked(local_difference_energy(ft, n, q, o), "coboundary local energy");
  out.rhs_coboundary_literal = 2.0 * std::ldexp(out.rhs_coboundary.value, -n);
  const double literal_error = 2.0 * std::ldexp(out.rhs_coboundary.error, -n);
  out.combined_error = out.lhs.error + out.rhs.error + out.lhs_coboundary.error + out.rhs_coboundary.error;

  CriteriaReport& rep = out.report;
  char subject[128];
  std::snprintf(subject, sizeof(subject), "%s n=%d q=%g", f.name.c_str(), n, q);
  rep.subject = subject;
  auto add = [&](const char* name, double lhs, double rhs, double err, const char* detail) {
    Criterion c;
    c.name = name;
    c.value = lhs;
    c.bound = rhs;
    c.margin = rhs - lhs;
    c.error = err;
    c.holds = lhs - rhs <= err;
    c.detail = detail;
    rep.add(std::move(c));
  };
  add("conditional expectation vs 2^n local energy of f", out.lhs.value, out.rhs.value,
      out.lhs.error + out.rhs.error, "holds when lhs - rhs <= combined quadrature error");
  add("coboundary part vs 2^n local energy of f~", out.lhs_coboundary.value, out.rhs_coboundary.value,
      out.lhs_coboundary.error + out.rhs_coboundary.error, "Jensen bound with the 2^n prefactor");
  add("coboundary part vs 2 x local energy of f~", out.lhs_coboundary.value, out.rhs_coboundary_literal,
      out.lhs_coboundary.error + literal_error, "bound with prefactor 2 as stated");
  return out;
}

CriterionIntegral criterion_integral(const FunctionOnUnitInterval& f, double q, double w, int max_shells,
                                     double abs_tol) {
  require(q >= 1.0, "q must be at least 1");
  require(w >= 0.0, "weight power must be non-negative");
  require(max_shells >= 24 && max_shells <= 62, "shell count must lie in [24, 62]");
  quad::QuadratureOptions o;
  o.abs_tol = abs_tol * 1e-3;
  o.rel_tol = 1e-10;
  CriterionIntegral out;
  auto weight = [w](double u) { return std::pow(std::log(1.0 / u), w) / u; };
  double sum = 0.0, err = 0.0;
  bool stopped = false;
  for (int m = 0; m < max_shells; ++m) {
    const double hi = std::ldexp(1.0, -m);
    const double lo = std::ldexp(1.0, -m - 1);
    QuadratureResult shell = weighted_energy(f, lo, hi, q, weight, o);
    if (!shell.converged) {
      throw ConvergenceError("criterion shell " + std::to_string(m) + " did not converge", shell.error);
    }
    out.shells.push_back({m, shell.value, shell.error});
    out.result.evaluations += shell.evaluations;
    sum += shell.value;
    err += shell.error;
    const std::size_t s = out.shells.size();
    if (s >= 6) {
      const double c0 = out.shells[s - 1].value, c1 = out.shells[s - 2].value, c2 = out.shells[s - 3].value;
      if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0) {
        stopped = true;
        break;
      }
      const double ratio = std::max(c1 > 0.0 ? c0 / c1 : 1.0, c2 > 0.0 ? c1 / c2 : 1.0);
      if (ratio <= 0.75 && c0 <= abs_tol * 1e-2) {
        out.tail_estimate = c0 * ratio / (1.0 - ratio);
        stopped = true;
        break;
      }
    }
  }
  if (!stopped) {
    // log-log slope of the last 20 shells decides between c_m ~ m^s with s >= -1 (divergent)
    // and a summable tail
    const std::size_t s = out.shells.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t j = s - 20; j < s; ++j) {
      const double c = out.shells[j].value;
      if (c <= 0.0) continue;
      const double x = std::log(static_cast<double>(out.shells[j].m + 1));
      const double y = std::log(c);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++k;
    }
    const double slope = k >= 2 ? (k * sxy - sx * sy) / (k * sxx - sx * sx) : -INFINITY;
    out.tail_slope = slope;
    const double last = out.shells.back().value;
    const double prev = out.shells[s - 2].value;
    const double ratio = prev > 0.0 ? last / prev : 0.0;
    if (slope >= -1.0) {
      out.divergent = true;
      out.tail_estimate = kInf;
    } else if (ratio < 0.9) {
      out.tail_estimate = last * ratio / (1.0 - ratio);
    } else {
      const double mm = static_cast<double>(out.shells.back().m + 1);
      out.tail_estimate = last * mm / (-slope - 1.0);
    }
  }
  out.result.subdivisions = static_cast<int>(out.shells.size());
  out.result.value = out.divergent ? kInf : sum + out.tail_estimate;
  out.result.error = out.divergent ? kInf : err + out.tail_estimate;
  out.result.converged = !out.divergent;
  return out;
}

namespace {

struct SeriesTail {
  double sum = 0.0;
  double tail = kInf;
  bool summable = false;
};

SeriesTail geometric_tail(const std::vector<double>& terms) {
  SeriesTail t;
  for (double a : terms) t.sum += a;
  if (terms.empty()) return t;
  const double last = terms.back();
  if (last == 0.0) {
    t.tail = 0.0;
    t.summable = true;
    return t;
  }
  if (terms.size() < 3) return t;
  const double r1 = terms[terms.size() - 1] / terms[terms.size() - 2];
  const double r2 = terms[terms.size() - 2] / terms[terms.size() - 3];
  const double ratio = std::max(r1, r2);
  if (ratio < 1.0 && ratio > 0.0) {
    t.tail = last * ratio / (1.0 - ratio);
    t.summable = true;
  }
  return t;
}

double hoelder_series_bound(double ci, double q, double w) {
  return std::pow(2.0 * std::pow(std::numbers::ln2, -w) * ci, 1.0 / q) *
         std::pow(std::riemann_zeta(w / (q - 1.0)), 1.0 - 1.0 / q);
}

}  // namespace

ProjectiveSeries projective_series_report(const FunctionOnUnitInterval& f, double q, int N, double delta) {
  if (N > 20) throw ResourceLimitError("projective series limited to N <= 20 terms");
  require(N >= 1, "N must be at least 1");
  require(q > 1.0 && delta > 0.0, "need q > 1 and delta > 0");
  const FunctionOnUnitInterval ft = ftilde(f);
  const quad::QuadratureOptions o = tight();
  ProjectiveSeries out;
  out.q = q;
  std::vector<double> a, b;
  bool within = true;
  for (int n = 1; n <= N; ++n) {
    const QuadratureResult lhs = checked(conditional_norm_power(f, n, q, o), "conditional-expectation norm");
    const QuadratureResult cob = checked(conditional_norm_power(ft, n, q, o), "coboundary conditional norm");
    const QuadratureResult rhs = checked(local_difference_energy(f, n, q, o), "local difference energy");
    SeriesRow row;
    row.n = n;
    row.norm = std::pow(lhs.value, 1.0 / q);
    row.norm_coboundary = std::pow(cob.value, 1.0 / q);
    row.bound = std::pow(rhs.value, 1.0 / q);
    row.error = lhs.error + cob.error + rhs.error;
    within = within && lhs.value - rhs.value <= lhs.error + rhs.error;
    out.bound_sum += row.bound;
    a.push_back(row.norm);
    b.push_back(row.norm_coboundary);
    out.rows.push_back(row);
  }
  const SeriesTail ta = geometric_tail(a), tb = geometric_tail(b);
  out.partial_sum = ta.sum;
  out.partial_sum_coboundary = tb.sum;
  out.tail_estimate = ta.tail;
  out.tail_estimate_coboundary = tb.tail;
  const double w = q - 1.0 + delta;
  const CriterionIntegral ci = criterion_integral(f, q, w);
  if (!ci.divergent) out.hoelder_bound = hoelder_series_bound(ci.result.value, q, w);

  CriteriaReport& rep = out.report;
  rep.subject = f.name + " projective series";
  auto series = [&](const char* name, const SeriesTail& t) {
    Criterion c;
    c.name = name;
    c.holds = t.summable;
    c.value = t.sum;
    c.bound = t.tail;
    c.margin = t.summable ? 1.0 : -1.0;
    c.verdict = t.summable ? "converges" : "inconclusive";
    c.detail = "partial sum with geometric tail extrapolated from the last two term ratios";
    rep.add(std::move(c));
  };
  series("conditional-expectation series", ta);
  series("coboundary series", tb);
  Criterion each;
  each.name = "each conditional norm within its local-energy bound";
  each.holds = within;
  each.verdict = within ? "holds" : "fails";
  rep.add(each);
  Criterion crit;
  crit.name = "weighted integral criterion";
  crit.holds = !ci.divergent;
  crit.value = ci.result.value;
  crit.error = ci.result.error;
  crit.verdict = ci.divergent ? "diverges" : "finite";
  rep.add(crit);
  if (out.hoelder_bound) {
    Criterion hb;
    hb.name = "bound column sum within the Hoelder bound";
    hb.value = out.bound_sum;
    hb.bound = *out.hoelder_bound;
    hb.margin = hb.bound - hb.value;
    hb.holds = hb.margin >= -ci.result.error;
    rep.add(hb);
  }
  return out;
}

const char* to_string(Target t) {
  switch (t) {
    case Target::kInvariance: return "invariance";
    case Target::kLil: return "lil";
    default: return "strong-law";
  }
}

CriteriaReport corollary_report(const FunctionOnUnitInterval& f, const CorollaryInputs& in) {
  require(in.p > 1.0 && in.p < 2.0, "p must lie in (1, 2)");
  require(in.delta > 0.0, "delta must be positive");
  require(in.terms >= 3 && in.terms <= 20, "series terms must lie in [3, 20]");
  CriteriaReport rep;
  rep.subject = f.name + " " + to_string(in.target);
  const double p = in.p;
  const double conj = p / (p - 1.0);
  double a_exp, b_exp, w_f, w_t;
  double needed;  // integrability requirement on f
  bool strict_needed;
  if (in.target == Target::kStrongLaw) {
    const bool range_ok = in.reading == RangeReading::kCorrected ? (in.r > p && in.r < 2.0) : (in.r > p && in.r < 1.0);
    Criterion range;
    range.name = in.reading == RangeReading::kCorrected ? "r in (p, 2)" : "r in (p, 1)";
    range.holds = range_ok;
    range.value = in.r;
    range.verdict = range_ok ? "holds" : (in.reading == RangeReading::kLiteral ? "empty range" : "fails");
    rep.add(range);
    if (!range_ok) return rep;
    const double r = in.r;
    a_exp = std::max(1.0, (p - 1.0) * r / (r - 1.0));
    b_exp = r;
    w_f = a_exp - 1.0 + in.delta;
    w_t = r - 1.0 + in.delta;
    needed = r;
    strict_needed = false;
  } else {
    a_exp = p;
    b_exp = conj;
    w_f = p - 1.0 + in.delta;
    w_t = 1.0 / (p - 1.0) + in.delta;
    needed = conj;
    strict_needed = in.target == Target::kInvariance;
  }
  Criterion integ;
  integ.name = strict_needed ? "f in L_0^{p/(p-1),inf}" : "f in L^" + std::to_string(needed);
  integ.value = f.integrability;
  integ.bound = needed;
  integ.margin = f.integrability - needed;
  integ.holds = f.integrability > needed;
  integ.verdict = integ.holds ? "holds" : (f.integrability == needed ? "inconclusive" : "fails");
  integ.detail = "from the family's integrability exponent";
  rep.add(integ);

  const FunctionOnUnitInterval ft = ftilde(f);
  auto criterion = [&](const std::string& name, const FunctionOnUnitInterval& g, double q, double w) {
    const CriterionIntegral ci = criterion_integral(g, q, w);
    Criterion c;
    c.name = name;
    c.holds = !ci.divergent;
    c.value = ci.result.value;
    c.error = ci.result.error;
    c.verdict = ci.divergent ? "diverges" : "finite";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "exponent %.6g, log weight %.6g, tail slope %.4g", q, w, ci.tail_slope);
    c.detail = buf;
    rep.add(std::move(c));
  };
  criterion("weighted integral of f", f, a_exp, w_f);
  criterion("weighted integral of f~", ft, b_exp, w_t);

  const quad::QuadratureOptions o = tight();
  auto series = [&](const std::string& name, const FunctionOnUnitInterval& g, double q) {
    std::vector<double> terms;
    for (int n = 1; n <= in.terms; ++n) {
      terms.push_back(std::pow(checked(conditional_norm_power(g, n, q, o), name).value, 1.0 / q));
    }
    const SeriesTail t = geometric_tail(terms);
    Criterion c;
    c.name = name;
    c.holds = t.summable;
    c.value = t.sum;
    c.bound = t.tail;
    c.verdict = t.summable ? "converges" : "inconclusive";
    c.detail = "sum of conditional norms; summability implies convergence of E[S_n(f)|M] in that norm";
    rep.add(std::move(c));
  };
  series("conditional-expectation series in L^" + std::to_string(a_exp), f, a_exp);
  series("coboundary series in L^" + std::to_string(b_exp), ft, b_exp);
  rep.extra["verdict"] = rep.all_hold() ? "hypotheses verified numerically" : "hypotheses not verified";
  return rep;
}

}  // namespace cobound::bern
