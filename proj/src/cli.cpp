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

#include "cobound/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cobound/bernoulli_criteria.hpp"
#include "cobound/counterexamples.hpp"
#include "cobound/error.hpp"
#include "cobound/maximal.hpp"
#include "cobound/mc_harness.hpp"
#include "cobound/rng.hpp"
#include "cobound/series_checker.hpp"
#include "cobound/version.hpp"

namespace cobound::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kKeys = {
    "schema_version", "preset",    "system",     "exponents", "horizons", "paths",    "epsilons",
    "function",       "seed",      "alpha",      "beta",      "i0",       "i_max",    "precision",
    "window",         "martingale", "transfer",  "conditions", "k_max",   "n_max",    "thresholds",
    "n_values",       "q_values",  "targets",    "terms",     "delta",    "hypotheses", "reading"};

Json preset_table() {
  Json t;
  t["ip-counterexample"] = {{"system", "odometer"},
                            {"exponents", {{"p", "6/5"}, {"r", "4"}}},
                            {"alpha", 0.3667},
                            {"i0", 4},
                            {"i_max", 22},
                            {"precision", 24},
                            {"martingale", "none"},
                            {"transfer", {{"kind", "tower"}}},
                            {"horizons", {256, 512, 1024, 2048, 4096}},
                            {"paths", 10000},
                            {"epsilons", {0.1, 0.5, 1.0}},
                            {"seed", 20240607},
                            {"hypotheses", {"invariance-counterexample"}}};
  t["slln-counterexample"] = {{"system", "odometer"},
                              {"exponents", {{"q", "11/10"}, {"p", "9/5"}, {"r", "3"}}},
                              {"beta", 0.3611},
                              {"i_max", 20},
                              {"precision", 24},
                              {"martingale", "none"},
                              {"transfer", {{"kind", "tower"}}},
                              {"horizons", {256, 512, 1024, 2048, 4096}},
                              {"paths", 2000},
                              {"epsilons", {0.5}},
                              {"seed", 20240607},
                              {"hypotheses", {"strong-law-counterexample"}}};
  t["series-example"] = {{"exponents", {{"p", "3/2"}}}, {"k_max", 1000000}};
  t["clt-rademacher"] = {{"system", "shift"},
                         {"martingale", "rademacher"},
                         {"transfer", {{"kind", "cosine"}, {"amplitude", 1.0}}},
                         {"horizons", {4096}},
                         {"paths", 4000},
                         {"seed", 20240607}};
  t["maximal-random"] = {{"function", {{"family", "random-level"}, {"level", 8}}},
                         {"exponents", {{"q", "2"}}},
                         {"precision", 14},
                         {"n_max", 1024},
                         {"thresholds", 64},
                         {"seed", 20240607}};
  auto f_preset = [](Json function) {
    return Json{{"function", std::move(function)},
                {"exponents", {{"p", "3/2"}, {"r", "9/5"}}},
                {"q_values", {1.5, 2.0}},
                {"n_values", {1, 2, 3, 4, 5, 6, 7, 8}},
                {"targets", {"invariance", "lil", "strong-law"}},
                {"terms", 12},
                {"delta", 0.1}};
  };
  t["f-affine"] = f_preset({{"family", "affine"}, {"slope", 1.0}, {"intercept", -0.5}});
  t["f-cosine"] = f_preset({{"family", "cosine"}, {"frequency", 1}, {"amplitude", 1.0}});
  t["f-indicator"] = f_preset({{"family", "indicator-step"}, {"c", 0.5}});
  t["f-weierstrass"] = f_preset({{"family", "weierstrass"}, {"a", 0.5}, {"b", 3}, {"terms", 20}});
  t["f-power"] = f_preset({{"family", "power"}, {"s", 0.3}});
  t["f-log-singular"] = f_preset({{"family", "log-singular"}, {"s", 0.5}, {"w", 2.0}});
  return t;
}

class Outputs {
 public:
  Outputs(fs::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {}

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + (dir_ / name).string());
    f << content;
    char h[17];
    std::snprintf(h, sizeof(h), "%016llx", static_cast<unsigned long long>(fnv1a(content)));
    files_.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a", h}});
  }
  void write_json(const std::string& name, Json doc) {
    doc["config_hash"] = hash_;
    write(name, doc.dump(2) + "\n");
  }
  const Json& files() const { return files_; }

 private:
  fs::path dir_;
  std::string hash_;
  Json files_ = Json::array();
};

struct Context {
  Json config;
  unsigned workers = 1;
  Outputs* out = nullptr;
};

Rational exponent(const Json& cfg, const char* name, std::optional<Rational> fallback = std::nullopt) {
  if (!cfg.contains("exponents") || !cfg["exponents"].contains(name)) {
    if (fallback) return *fallback;
    throw PreconditionError(std::string("config lacks exponents.") + name);
  }
  const Json& v = cfg["exponents"][name];
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number()) return Rational::from_double_shortest(v.get<double>());
  throw PreconditionError(std::string("exponents.") + name + " must be a number or a fraction string");
}

template <class T>
T value_or(const Json& cfg, const char* key, T fallback) {
  return cfg.contains(key) ? cfg[key].get<T>() : fallback;
}

std::string csv_double(double x) {
  char b[40];
  std::snprintf(b, sizeof(b), "%.17g", x);
  return b;
}

cex::TowerCounterexample build_counterexample(const Json& cfg) {
  cex::Exponents e;
  const bool slln = cfg.contains("exponents") && cfg["exponents"].contains("q");
  e.p = exponent(cfg, "p").to_double();
  e.r = exponent(cfg, "r").to_double();
  if (slln) e.q = exponent(cfg, "q").to_double();
  const char* wkey = slln ? "beta" : "alpha";
  const auto choice = cfg.contains(wkey) ? cex::WindowChoice::exact(cfg[wkey].get<double>())
                                         : cex::WindowChoice::midpoint();
  std::optional<int> i0;
  if (cfg.contains("i0")) i0 = cfg["i0"].get<int>();
  return cex::build_tower_counterexample(slln ? cex::Kind::kStrongLaw : cex::Kind::kInvariancePrinciple, e,
                                         choice, i0, value_or(cfg, "i_max", 22), value_or(cfg, "precision", 24));
}

int cmd_counterexample(Context& ctx) {
  const Json& cfg = ctx.config;
  const cex::TowerCounterexample c = build_counterexample(cfg);
  const double eps = cfg.contains("epsilons") ? cfg["epsilons"].at(0).get<double>() : 0.1;
  const cex::NormTable table = cex::exact_norms(c, eps);
  ctx.out->write("norms.csv", table.to_csv());

  std::string plot;
  Json rows = Json::array();
  bool ok = true;
  for (const cex::NormRow& r : table.rows) {
    const bool holds = r.norm_transfer <= r.norm_transfer_bound && r.norm_coboundary <= r.norm_coboundary_bound &&
                       r.coboundary_support <= r.coboundary_support_bound;
    ok = ok && holds;
    plot += std::to_string(r.i) + " " + csv_double(r.norm_transfer) + "\n";
    rows.push_back({{"i", r.i},
                    {"norm_transfer", r.norm_transfer},
                    {"norm_transfer_bound", r.norm_transfer_bound},
                    {"norm_coboundary", r.norm_coboundary},
                    {"norm_coboundary_bound", r.norm_coboundary_bound},
                    {"coboundary_support", r.coboundary_support.str()},
                    {"decay_ratio", r.decay_ratio},
                    {"predicted_ratio", r.predicted_ratio},
                    {"violation_probability", r.violation_probability},
                    {"bounds_hold", holds}});
  }
  ctx.out->write("norms.dat", plot);
  Json rep;
  rep["kind"] = cex::to_string(c.kind);
  rep["window"] = {c.window.lower.str(), c.window.upper.str()};
  rep["window_exponent"] = c.window_exponent;
  rep["i0"] = c.i0;
  rep["i_max"] = c.i_max;
  rep["precision"] = c.precision;
  rep["epsilon"] = eps;
  rep["asymptotic_decay_ratio"] = cex::asymptotic_decay_ratio(c);
  rep["truncation_risk"] = cex::truncation_risk(c);
  rep["rows"] = rows;
  rep["bounds_hold"] = ok;
  rep["code_version"] = kCodeVersion;
  ctx.out->write_json("counterexample.json", rep);
  return ok ? kOk : kVerdictFailure;
}

mc::ExperimentConfig experiment_config(const Context& ctx) {
  const Json& cfg = ctx.config;
  mc::ExperimentConfig c;
  const std::string system = value_or<std::string>(cfg, "system", "shift");
  if (system == "odometer") c.system = mc::System::kOdometer;
  else if (system == "shift") c.system = mc::System::kShift;
  else throw PreconditionError("system must be odometer or shift, got " + system);
  c.precision = value_or(cfg, "precision", c.precision);
  c.window = value_or(cfg, "window", c.window);
  const std::string m = value_or<std::string>(cfg, "martingale", "none");
  if (m == "rademacher") c.martingale = mc::MartingaleKind::kRademacher;
  else if (m != "none") throw PreconditionError("martingale must be rademacher or none, got " + m);
  if (cfg.contains("transfer")) {
    const Json& t = cfg["transfer"];
    const std::string kind = value_or<std::string>(t, "kind", "none");
    if (kind == "tower") {
      c.transfer.kind = mc::TransferKind::kTower;
      c.transfer.tower = build_counterexample(cfg);
    } else if (kind == "cosine") {
      c.transfer.kind = mc::TransferKind::kCosine;
    } else if (kind == "identity") {
      c.transfer.kind = mc::TransferKind::kIdentity;
    } else if (kind == "power") {
      c.transfer.kind = mc::TransferKind::kPower;
    } else if (kind != "none") {
      throw PreconditionError("unknown transfer kind " + kind);
    }
    c.transfer.amplitude = value_or(t, "amplitude", c.transfer.amplitude);
    c.transfer.power = value_or(t, "power", c.transfer.power);
  }
  if (cfg.contains("horizons")) c.horizons = cfg["horizons"].get<std::vector<std::int64_t>>();
  c.paths = value_or<std::int64_t>(cfg, "paths", c.paths);
  c.seed = value_or<std::uint64_t>(cfg, "seed", 0);
  if (cfg.contains("epsilons")) c.epsilons = cfg["epsilons"].get<std::vector<double>>();
  c.p = exponent(cfg, "p", Rational(3, 2)).to_double();
  if (cfg.contains("alpha") && c.transfer.kind != mc::TransferKind::kTower) c.alpha = cfg["alpha"].get<double>();
  c.workers = ctx.workers;
  c.validate();
  return c;
}

int cmd_conditions(Context& ctx) {
  const mc::ExperimentConfig c = experiment_config(ctx);
  std::vector<std::string> which = {"max-partial-sum", "block-maxima", "strong-law"};
  if (ctx.config.contains("conditions")) which = ctx.config["conditions"].get<std::vector<std::string>>();
  bool agree = true;
  for (const std::string& name : which) {
    mc::ConditionReport r;
    if (name == "max-partial-sum") r = mc::condition16_report(c);
    else if (name == "block-maxima") r = mc::condition17_report(c);
    else if (name == "strong-law") r = mc::slln_report(c);
    else throw PreconditionError("unknown condition " + name);
    agree = agree && r.oracle_agrees();
    ctx.out->write(name + ".csv", r.to_csv());
    ctx.out->write_json(name + ".json", r.to_json());
    if (!r.path_sups.empty()) {
      std::string plot;
      for (std::size_t j = 0; j < r.path_sups.size(); ++j) plot += std::to_string(j) + " " + csv_double(r.path_sups[j]) + "\n";
      ctx.out->write(name + "-sups.dat", plot);
    }
  }
  return agree ? kOk : kVerdictFailure;
}

int cmd_clt(Context& ctx) {
  const mc::ExperimentConfig c = experiment_config(ctx);
  const mc::CltReport r = mc::clt_lil_report(c);
  ctx.out->write_json("clt.json", r.to_json());
  std::string plot;
  for (std::size_t j = 0; j < r.scaled_sums.size(); ++j) plot += std::to_string(j) + " " + csv_double(r.scaled_sums[j]) + "\n";
  ctx.out->write("scaled-sums.dat", plot);
  return r.max_telescoping_excess <= 1e-9 ? kOk : kVerdictFailure;
}

maximal::LevelFunction level_function(const Json& cfg) {
  if (!cfg.contains("function")) throw PreconditionError("maximal needs a function entry");
  const Json& f = cfg["function"];
  const std::string family = value_or<std::string>(f, "family", "");
  const int level = value_or(f, "level", 8);
  require(level >= 0 && level <= 20, "level must lie in [0, 20]");
  maximal::LevelFunction h;
  h.i = level;
  if (family == "level") {
    h.values = f.at("values").get<std::vector<double>>();
    require(h.values.size() == (std::size_t{1} << level), "level function needs 2^level values");
  } else if (family == "random-level") {
    // values j/16 with j uniform in [0, 64)
    const CounterRng rng(value_or<std::uint64_t>(cfg, "seed", 0), value_or<std::uint64_t>(f, "stream", 0));
    h.values.resize(std::size_t{1} << level);
    for (std::size_t j = 0; j < h.values.size(); ++j) h.values[j] = static_cast<double>(rng.u64(j) >> 58) / 16.0;
  } else if (family == "zero-cylinder") {
    h = maximal::LevelFunction::indicator_of_zero_cylinder(level, value_or(f, "depth", 1));
  } else {
    throw PreconditionError("unknown level-function family '" + family + "'");
  }
  return h;
}

int cmd_maximal(Context& ctx) {
  const Json& cfg = ctx.config;
  const int precision = value_or(cfg, "precision", 14);
  if (precision > maximal::kMaxEnumerationBits) {
    throw ResourceLimitError("maximal enumeration over 2^" + std::to_string(precision) + " points exceeds the 2^" +
                             std::to_string(maximal::kMaxEnumerationBits) + " guard");
  }
  const maximal::LevelFunction h = level_function(cfg);
  double top = 0.0;
  for (double v : h.values) top = std::max(top, v);
  require(top > 0.0, "level function is identically zero");
  const auto grid = maximal::dyadic_threshold_grid(top, value_or<std::size_t>(cfg, "thresholds", 64));
  const double q = exponent(cfg, "q", Rational(2)).to_double();
  const maximal::MaximalReport r =
      maximal::maximal_inequality_report(h, precision, value_or<std::int64_t>(cfg, "n_max", 1024), grid, q, ctx.workers);
  ctx.out->write("maximal.csv", r.to_csv());
  Json doc = r.to_json();
  doc["code_version"] = kCodeVersion;
  ctx.out->write_json("maximal.json", doc);
  return r.violations_maximal() == 0 && r.violations_weak() == 0 ? kOk : kVerdictFailure;
}

bern::FunctionOnUnitInterval function_from(const Json& f) {
  using F = bern::FunctionOnUnitInterval;
  const std::string family = value_or<std::string>(f, "family", "");
  if (family == "constant") return F::constant(value_or(f, "c", 0.0));
  if (family == "affine") return F::affine(value_or(f, "slope", 1.0), value_or(f, "intercept", -0.5));
  if (family == "cosine") return F::cosine(value_or(f, "frequency", 1), value_or(f, "amplitude", 1.0));
  if (family == "indicator-step") return F::indicator_step(value_or(f, "c", 0.5), value_or(f, "centered", true));
  if (family == "weierstrass") return F::weierstrass(value_or(f, "a", 0.5), value_or(f, "b", 3), value_or(f, "terms", 20));
  if (family == "power") return F::power(value_or(f, "s", 0.3));
  if (family == "log-singular") return F::log_singular(value_or(f, "s", 0.5), value_or(f, "w", 2.0));
  throw PreconditionError("unknown function family '" + family + "'");
}

int cmd_criteria(Context& ctx) {
  const Json& cfg = ctx.config;
  if (!cfg.contains("function")) throw PreconditionError("criteria needs a function entry");
  const bern::FunctionOnUnitInterval f = function_from(cfg["function"]);
  const auto q_values = value_or(cfg, "q_values", std::vector<double>{2.0});
  const auto n_values = value_or(cfg, "n_values", std::vector<int>{1, 2, 3, 4});
  Json doc;
  doc["function"] = f.name;
  doc["code_version"] = kCodeVersion;

  bool ok = true;
  std::string csv = "q,n,lhs,rhs,lhs_coboundary,rhs_coboundary,rhs_coboundary_literal,combined_error\n";
  Json lemma = Json::array();
  for (double q : q_values) {
    if (!(f.integrability > q)) continue;
    for (int n : n_values) {
      const bern::Lemma32Result r = bern::lemma32_check(f, n, q);
      ok = ok && r.report.all_hold();
      csv += csv_double(q) + "," + std::to_string(n) + "," + csv_double(r.lhs.value) + "," + csv_double(r.rhs.value) +
             "," + csv_double(r.lhs_coboundary.value) + "," + csv_double(r.rhs_coboundary.value) + "," +
             csv_double(r.rhs_coboundary_literal) + "," + csv_double(r.combined_error) + "\n";
      lemma.push_back(r.report.to_json());
    }
  }
  ctx.out->write("local-energy.csv", csv);
  doc["local_energy"] = lemma;

  const double p = exponent(cfg, "p", Rational(3, 2)).to_double();
  const double r_exp = exponent(cfg, "r", Rational(9, 5)).to_double();
  const double delta = value_or(cfg, "delta", 0.1);
  const int terms = value_or(cfg, "terms", 12);
  const std::string reading = value_or<std::string>(cfg, "reading", "corrected");
  if (reading != "corrected" && reading != "literal") throw PreconditionError("reading must be corrected or literal");
  Json corollaries = Json::array();
  for (const std::string& t : value_or(cfg, "targets", std::vector<std::string>{})) {
    bern::CorollaryInputs in;
    if (t == "invariance") in.target = bern::Target::kInvariance;
    else if (t == "lil") in.target = bern::Target::kLil;
    else if (t == "strong-law") in.target = bern::Target::kStrongLaw;
    else throw PreconditionError("unknown target " + t);
    in.p = p;
    in.r = r_exp;
    in.delta = delta;
    in.terms = terms;
    in.reading = reading == "literal" ? bern::RangeReading::kLiteral : bern::RangeReading::kCorrected;
    corollaries.push_back(bern::corollary_report(f, in).to_json());
  }
  doc["corollaries"] = corollaries;

  if (f.integrability > q_values.front()) {
    const bern::ProjectiveSeries s = bern::projective_series_report(f, q_values.front(), std::min(terms, 20), delta);
    std::string plot;
    for (const bern::SeriesRow& row : s.rows) plot += std::to_string(row.n) + " " + csv_double(row.norm) + "\n";
    ctx.out->write("projective-norms.dat", plot);
    doc["projective_series"] = s.report.to_json();
  }
  ctx.out->write_json("criteria.json", doc);
  return ok ? kOk : kVerdictFailure;
}

int cmd_series(Context& ctx) {
  const Json& cfg = ctx.config;
  const double p = exponent(cfg, "p", Rational(3, 2)).to_double();
  const series::Prop23Report r =
      series::prop23_report(series::SequenceFamily::example(p), value_or<std::int64_t>(cfg, "k_max", 1000000));
  std::string csv = "k,sum_main,sum_quadratic,tail_quantity\n";
  for (const series::Checkpoint& c : r.checkpoints) {
    csv += std::to_string(c.k) + "," + csv_double(c.sum_main) + "," + csv_double(c.sum_quadratic) + "," +
           csv_double(c.tail_quantity) + "\n";
  }
  ctx.out->write("series.csv", csv);
  Json doc = r.to_json();
  doc["code_version"] = kCodeVersion;
  ctx.out->write_json("series.json", doc);
  return r.report.all_hold() ? kOk : kVerdictFailure;
}

int cmd_validate(Context& ctx) {
  const Json& cfg = ctx.config;
  mc::RationalExponents e;
  e.q = exponent(cfg, "q", Rational(1));
  e.p = exponent(cfg, "p");
  e.r = exponent(cfg, "r");
  std::vector<std::string> names = value_or(cfg, "hypotheses", std::vector<std::string>{});
  require(!names.empty(), "validate needs a non-empty hypotheses list");
  Json doc;
  doc["exponents"] = {{"q", e.q.str()}, {"p", e.p.str()}, {"r", e.r.str()}};
  doc["code_version"] = kCodeVersion;
  Json reports = Json::array();
  bool ok = true;
  for (const std::string& name : names) {
    const CriteriaReport r = mc::validate_hypotheses(e, mc::parse_hypothesis(name));
    ok = ok && r.all_hold();
    reports.push_back(r.to_json());
  }
  doc["reports"] = reports;
  ctx.out->write_json("validate.json", doc);
  return ok ? kOk : kVerdictFailure;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char b[32];
  std::strftime(b, sizeof(b), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return b;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> preset_names() {
  const Json table = preset_table();
  std::vector<std::string> names;
  for (const auto& [k, v] : table.items()) names.push_back(k);
  return names;
}

Json preset(const std::string& name) {
  const Json t = preset_table();
  if (!t.contains(name)) throw PreconditionError("unknown preset '" + name + "'");
  return t[name];
}

Json resolve_config(const Json& user) {
  if (!user.is_object()) throw PreconditionError("config must be a JSON object");
  for (const auto& [k, v] : user.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), k) == kKeys.end()) throw PreconditionError("unknown config key '" + k + "'");
  }
  if (user.contains("schema_version") && user["schema_version"] != kSchemaVersion) {
    throw PreconditionError("unsupported schema_version " + user["schema_version"].dump());
  }
  Json out = user.contains("preset") ? preset(user["preset"].get<std::string>()) : Json::object();
  for (const auto& [k, v] : user.items()) out[k] = v;
  out["schema_version"] = kSchemaVersion;
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coboundary and martingale-approximation experiments", "cobound"};
  app.require_subcommand(1);
  std::string config_path, preset_name, out_dir = "cobound-out";
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"counterexample", "exact tower counterexample tables"},
      {"conditions", "Monte Carlo condition reports"},
      {"clt", "central limit and iterated logarithm diagnostics"},
      {"maximal", "maximal ergodic inequality enumeration"},
      {"criteria", "doubling-map criteria checks"},
      {"series", "sequence-family series checker"},
      {"validate", "exact hypothesis windows"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--preset", preset_name, "named preset used when no config file is given");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    Json user = Json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw PreconditionError("cannot open config " + config_path);
      user = Json::parse(f);
    } else if (!preset_name.empty()) {
      user["preset"] = preset_name;
    } else {
      throw PreconditionError("either --config or --preset is required");
    }
    if (seed) user["seed"] = *seed;
    Json config = resolve_config(user);
    // canonical form: sorted keys, so key order in the file does not matter
    const std::string dumped = nlohmann::json::parse(config.dump()).dump();
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(dumped)));

    fs::create_directories(out_dir);
    Outputs outputs(out_dir, hash);
    Context ctx{config, workers, &outputs};
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    int status = kOk;
    if (sub == "counterexample") status = cmd_counterexample(ctx);
    else if (sub == "conditions") status = cmd_conditions(ctx);
    else if (sub == "clt") status = cmd_clt(ctx);
    else if (sub == "maximal") status = cmd_maximal(ctx);
    else if (sub == "criteria") status = cmd_criteria(ctx);
    else if (sub == "series") status = cmd_series(ctx);
    else status = cmd_validate(ctx);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json manifest;
    manifest["subcommand"] = sub;
    manifest["config_path"] = config_path;
    manifest["config"] = config;
    manifest["config_hash"] = hash;
    manifest["seed"] = value_or<std::uint64_t>(config, "seed", 0);
    manifest["workers"] = workers;
    manifest["output_dir"] = out_dir;
    manifest["code_version"] = kCodeVersion;
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_now();
    manifest["wall_seconds"] = seconds;
    manifest["exit_status"] = status;
    manifest["outputs"] = outputs.files();
    std::ofstream(fs::path(out_dir) / "manifest.json") << manifest.dump(2) << "\n";
    out << sub << ": " << (status == kOk ? "ok" : "verdict failure") << " (" << outputs.files().size()
        << " files in " << out_dir << ")\n";
    return status;
  } catch (const ResourceLimitError& e) {
    err << "error: resource guard: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "error: invalid config: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kConfigError;
}

}  // namespace cobound::cli
