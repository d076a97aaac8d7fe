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

// Acceptance run: one PASS/FAIL line per criterion, details indented below it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cobound/bernoulli_criteria.hpp"
#include "cobound/cli.hpp"
#include "cobound/counterexamples.hpp"
#include "cobound/maximal.hpp"
#include "cobound/mc_harness.hpp"
#include "cobound/rng.hpp"
#include "cobound/series_checker.hpp"

using namespace cobound;
namespace fs = std::filesystem;

namespace {

// tolerances
constexpr double kRatioTolerance = 0.10;       // criterion 1(b), relative
constexpr double kViolationFloor = 0.3;        // criterion 1(c)
constexpr double kSigmas = 3.0;                // criterion 4
constexpr double kKsLimit = 0.035;             // criterion 5
constexpr double kKsShift = 0.01;              // criterion 5, paired run
constexpr double kTelescopeSlack = 1e-9;       // criterion 5, float rounding of 2 max|g|
constexpr double kQuadError = 1e-6;            // criterion 6
constexpr double kAnchorError = 1e-10;         // criterion 6
constexpr double kReferenceFactor = 2.0;       // criterion 7
constexpr double kTailDrop = 0.1;              // criterion 7
constexpr double kGrowth = 5.0;                // criterion 7

unsigned workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { lines.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char b[512];
  std::snprintf(b, sizeof(b), f, args...);
  return b;
}

cex::TowerCounterexample ip_preset() {
  return cex::build_tower_counterexample(cex::Kind::kInvariancePrinciple, {0.0, 1.2, 4.0},
                                         cex::WindowChoice::exact(0.3667), 4, 22, 24);
}

Outcome criterion1() {
  Outcome o;
  const cex::TowerCounterexample c = ip_preset();
  const cex::NormTable t = cex::exact_norms(c, 0.1);
  std::size_t over = 0;
  double worst_ratio = 0.0;
  for (const cex::NormRow& r : t.rows) {
    over += r.norm_transfer > r.norm_transfer_bound;
    if (r.i > c.i0) worst_ratio = std::max(worst_ratio, std::abs(r.decay_ratio / r.predicted_ratio - 1.0));
  }
  o.check(over == 0, fmt("(a) ||g_i||_p <= bound for all %zu towers, zero tolerance", t.rows.size()));
  o.check(worst_ratio <= kRatioTolerance,
          fmt("(b) increment ratios vs 2^{(alpha-1+p/2)/p} with log drift: worst relative gap %.4f (limit %.2f)",
              worst_ratio, kRatioTolerance));
  double lowest = 1.0;
  for (int i = 10; i <= 22; ++i) {
    const auto n = std::int64_t{1} << i;
    const cex::TowerBound b = cex::orbit_max_lower_bound(c, 1, n, 0.1 * std::sqrt(static_cast<double>(n)));
    lowest = std::min(lowest, b.probability.to_double());
  }
  o.check(lowest >= kViolationFloor,
          fmt("(c) exact mu{max_{k<=2^i} g o T^k > 0.1 sqrt(2^i)} >= %.1f for i in [10,22]: min %.6f", kViolationFloor,
              lowest));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const cex::TowerCounterexample c = cex::build_tower_counterexample(cex::Kind::kStrongLaw, {1.1, 1.8, 3.0},
                                                                     cex::WindowChoice::exact(0.3611), {}, 20, 24);
  Rational lowest(1);
  for (int i = 8; i <= 20; ++i) {
    lowest = std::min(lowest, cex::slln_event_probability(c, i, std::int64_t{1} << i, std::int64_t{1} << (i + 1)));
  }
  o.check(lowest >= Rational(1, 2), "exact measure of {2^{-i/p} max_{l in [2^i,2^{i+1}]} g_i o T^l >= 1} >= 1/2 for "
                                    "i in [8,20]: min " + lowest.str());
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t v31 = 0, v38 = 0, v38r = 0, rows = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    maximal::LevelFunction h;
    h.i = 8;
    const CounterRng rng(20240607, s);
    for (std::size_t j = 0; j < 256; ++j) h.values.push_back(static_cast<double>(rng.u64(j) >> 58) / 16.0);
    double top = 0.0;
    for (double v : h.values) top = std::max(top, v);
    const auto grid = maximal::dyadic_threshold_grid(top, 64);
    const maximal::MaximalReport r = maximal::maximal_inequality_report(h, 14, 1024, grid, 2.0, workers());
    v31 += r.violations_maximal();
    v38 += r.violations_weak_global();
    v38r += r.violations_weak();
    rows += r.rows.size();
  }
  o.check(v31 == 0, fmt("t mu{M* >= t} <= E[h 1{M* >= t}]: %zu violations over %zu thresholds", v31, rows));
  o.check(v38 == 0, fmt("t mu{M* >= t}^{1/2} <= 2 ||h||_{2,inf}: %zu violations", v38));
  o.note(fmt("restricted form with ||h 1(A_t)||_{2,inf}: %zu violations (informational)", v38r));
  return o;
}

Outcome criterion4() {
  Outcome o;
  mc::ExperimentConfig c;
  c.system = mc::System::kOdometer;
  c.precision = 24;
  c.transfer.kind = mc::TransferKind::kTower;
  c.transfer.tower = ip_preset();
  c.horizons = {4096};
  c.paths = 10000;
  c.seed = 20240607;
  c.epsilons = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  c.workers = workers();
  const mc::ConditionReport r = mc::condition16_report(c);
  for (const mc::EstimateRow& row : r.rows) {
    const double p = row.exact.value_or(-1.0);
    const double sigma = std::sqrt(std::max(p, 0.0) * (1.0 - std::max(p, 0.0)) / static_cast<double>(row.paths));
    o.check(row.exact.has_value() && row.estimate >= p - kSigmas * sigma,
            fmt("eps=%-4g estimate %.4f vs exact lower bound %.6f (sigma %.4f)", row.epsilon, row.estimate, p, sigma));
  }
  // a single tower has an exact (not lower-bound) probability; n_14 > 4096 keeps it inside (0, 1)
  c.transfer.tower = cex::build_tower_counterexample(cex::Kind::kInvariancePrinciple, {0.0, 1.2, 4.0},
                                                     cex::WindowChoice::exact(0.3667), 14, 14, 24);
  c.epsilons = {0.5, 1.0, 2.0, 2.8};
  const mc::ConditionReport s = mc::condition16_report(c);
  for (const mc::EstimateRow& row : s.rows) {
    const double p = row.exact.value_or(-1.0);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(row.paths));
    o.check(row.exact.has_value() && std::abs(row.estimate - p) <= kSigmas * sigma + 1e-12,
            fmt("single tower i=14, eps=%-4g estimate %.4f vs exact %.6f (sigma %.4f)", row.epsilon, row.estimate, p,
                sigma));
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  mc::ExperimentConfig c;
  c.system = mc::System::kShift;
  c.martingale = mc::MartingaleKind::kRademacher;
  c.horizons = {4096};
  c.paths = 4000;
  c.seed = 20240607;
  c.workers = workers();
  const mc::CltReport base = mc::clt_lil_report(c);
  o.check(base.ks_distance <= kKsLimit, fmt("g = 0: KS distance %.4f <= %.3f", base.ks_distance, kKsLimit));
  c.transfer.kind = mc::TransferKind::kCosine;
  c.transfer.amplitude = 1.0;
  const mc::CltReport pert = mc::clt_lil_report(c);
  const double limit = 2.0 / std::sqrt(4096.0);
  o.check(pert.max_perturbation <= limit + kTelescopeSlack,
          fmt("bounded g: max_paths |S_n(f) - S_n(m)|/sqrt(n) = %.5f <= 2/sqrt(n) = %.5f", pert.max_perturbation, limit));
  o.check(pert.max_telescoping_excess <= kTelescopeSlack,
          fmt("pathwise |S_n(f) - S_n(m)| - (|g_0| + |g_n|) = %.3g", pert.max_telescoping_excess));
  o.check(std::abs(pert.ks_distance - base.ks_distance) <= kKsShift,
          fmt("paired KS shift %.5f <= %.2f", std::abs(pert.ks_distance - base.ks_distance), kKsShift));
  return o;
}

Outcome criterion6() {
  Outcome o;
  using F = bern::FunctionOnUnitInterval;
  for (const F& f : {F::affine(1.0, -0.5), F::cosine(1)}) {
    for (double q : {1.5, 2.0}) {
      std::string failed_first, failed_literal;
      double worst_error = 0.0;
      for (int n = 1; n <= 8; ++n) {
        const bern::Lemma32Result r = bern::lemma32_check(f, n, q);
        worst_error = std::max(worst_error, r.combined_error);
        if (!r.report.at("conditional expectation vs 2^n local energy of f").holds) failed_first += " " + std::to_string(n);
        if (!r.report.at("coboundary part vs 2 x local energy of f~").holds) failed_literal += " " + std::to_string(n);
        if (!r.report.at("coboundary part vs 2^n local energy of f~").holds) o.note(fmt("2^n form fails at n=%d", n));
      }
      const std::string tag = f.name + fmt(" q=%g", q);
      o.check(failed_first.empty(), tag + ": ||E[f o T^n|M]||_q^q <= 2^n local energy, n=1..8" +
                                        (failed_first.empty() ? "" : ", fails at n =" + failed_first));
      o.check(failed_literal.empty(), tag + ": ||(I-U)E[f o T^n|M]||_q^q <= 2 x local energy of f~, n=1..8" +
                                          (failed_literal.empty() ? "" : ", fails at n =" + failed_literal));
      o.check(worst_error <= kQuadError, tag + fmt(": combined quadrature error %.2e <= 1e-6", worst_error));
    }
  }
  double anchor = 0.0;
  const F a = F::affine(1.0, -0.5);
  for (int j = 0; j <= 1000; ++j) {
    const double x = j / 1000.0;
    anchor = std::max(anchor, std::abs(bern::conditional_expectation(a, 1, x) - (x / 2 - 0.25)));
  }
  o.check(anchor <= kAnchorError, fmt("E[f o T | M](x) = x/2 - 1/4 for f = x - 1/2: max error %.2e", anchor));
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (double p : {1.2, 1.5, 1.8}) {
    const series::Prop23Report r = series::prop23_report(series::SequenceFamily::example(p), 1000000);
    o.check(r.max_reference_ratio <= kReferenceFactor,
            fmt("p=%.1f: main increments within factor %.4f of k^-1 log^-2 k", p, r.max_reference_ratio));
    o.check(r.tail_ratio <= kTailDrop, fmt("p=%.1f: tail quantity ratio 10^6 vs 10^3 = %.4f <= %.1f", p, r.tail_ratio,
                                           kTailDrop));
    o.check(r.quadratic_growth >= kGrowth,
            fmt("p=%.1f: quadratic series S(10^6)/S(10^3) = %.4f >= %.0f", p, r.quadratic_growth, kGrowth));
    o.note(fmt("p=%.1f verdicts: %s / %s / %s", p, r.main.verdict.c_str(), r.tail.verdict.c_str(),
               r.quadratic.verdict.c_str()));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t agree = 0, total = 0, exact_forms = 0;
  // (p, r) grid with 1 <= p < 2 <= r, including points on p = r/(r-1)
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      const Rational p = Rational(1) + Rational(a, 10);
      const Rational r = b < 5 ? Rational(2) + Rational(b, 2) : Rational(b + 1, b - 3);  // b >= 5: r/(r-1) = (b+1)/4
      if (r < Rational(2)) continue;
      const auto rep = mc::validate_hypotheses({Rational(1), p, r}, mc::Hypothesis::kInvarianceCounterexample);
      const Rational m = *rep.at("p < r/(r-1)").exact_margin;
      const bool direct = p.numerator() * (r.numerator() - r.denominator()) * r.denominator() <
                          r.numerator() * p.denominator() * r.denominator();
      ++total;
      agree += (m.sign() > 0) == direct;
      exact_forms += m == Rational(1, 2) * (r / (r - Rational(1)) - p);
    }
  }
  o.check(agree == total && exact_forms == total,
          fmt("(1/2)(r/(r-1) - p) > 0 iff p < r/(r-1): %zu/%zu grid points agree, %zu exact", agree, total,
              exact_forms));
  std::size_t agree2 = 0, total2 = 0, exact2 = 0;
  for (int a = 0; a < 100; ++a) {
    // 1 <= q < p < r < 2 on a grid of twentieths
    const int qi = 20 + a % 7, pi = qi + 1 + (a / 7) % 7, ri = std::min(39, pi + 1 + a % 5);
    const Rational q(qi, 20), p(pi, 20), r(ri, 20);
    if (!(p < r)) continue;
    const auto rep = mc::validate_hypotheses({q, p, r}, mc::Hypothesis::kStrongLawCounterexample);
    const Rational m = *rep.at("q < (p-1)r/(r-1)").exact_margin;
    const bool direct = static_cast<std::int64_t>(qi) * (ri - 20) < static_cast<std::int64_t>(pi - 20) * ri;
    ++total2;
    agree2 += (m.sign() > 0) == direct;
    exact2 += m == (p - Rational(1)) * r / (r - Rational(1)) - q;
  }
  o.check(agree2 == total2 && exact2 == total2 && total2 >= 100,
          fmt("(p-1)r/(r-1) - q > 0 iff q < (p-1)r/(r-1): %zu/%zu grid points agree, %zu exact", agree2, total2,
              exact2));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome criterion9() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "cobound-acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Case {
    std::string sub, config;
  };
  const std::vector<Case> cases = {
      {"counterexample", R"({"preset": "ip-counterexample"})"},
      {"counterexample", R"({"preset": "slln-counterexample"})"},
      {"maximal", R"({"preset": "maximal-random"})"},
      {"conditions", R"({"preset": "ip-counterexample", "conditions": ["max-partial-sum"], "horizons": [4096],
                        "epsilons": [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]})"},
      {"clt", R"({"preset": "clt-rademacher"})"},
      {"criteria", R"({"preset": "f-cosine", "targets": []})"},
      {"series", R"({"preset": "series-example"})"},
      {"validate", R"({"preset": "ip-counterexample"})"}};
  int idx = 0;
  for (const Case& c : cases) {
    const fs::path dir = root / std::to_string(idx++);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << c.config;
    std::ostringstream out, err;
    std::vector<std::string> hashes;
    for (const char* w : {"1", "4"}) {
      cli::run({c.sub, "--config", (dir / "config.json").string(), "--out", (dir / w).string(), "--workers", w}, out,
               err);
    }
    // re-run from the manifest's resolved config
    const auto manifest = nlohmann::json::parse(slurp(dir / "1" / "manifest.json"));
    std::ofstream(dir / "resolved.json") << manifest["config"].dump();
    cli::run({c.sub, "--config", (dir / "resolved.json").string(), "--out", (dir / "re").string(), "--workers", "3"},
             out, err);
    bool same = !manifest["outputs"].empty();
    for (const auto& f : manifest["outputs"]) {
      const std::string name = f["file"];
      const std::string a = slurp(dir / "1" / name);
      same = same && a == slurp(dir / "4" / name) && a == slurp(dir / "re" / name);
    }
    o.check(same, c.sub + " " + c.config.substr(0, c.config.find(',')) + (c.config.find(',') == std::string::npos ? "" : "...}") +
                      fmt(": %zu outputs byte-identical at workers 1, 4 and from the manifest", manifest["outputs"].size()));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 invariance counterexample integrity", criterion1},
      {"2 strong-law counterexample integrity", criterion2},
      {"3 maximal ergodic inequality", criterion3},
      {"4 Monte Carlo vs exact oracle", criterion4},
      {"5 CLT sanity and coboundary perturbation", criterion5},
      {"6 local energy inequalities on the doubling map", criterion6},
      {"7 series checker on the example family", criterion7},
      {"8 hypothesis windows", criterion8},
      {"9 determinism", criterion9}};
  int failures = 0;
  for (const auto& [name, body] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), s);
    for (const std::string& l : o.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
