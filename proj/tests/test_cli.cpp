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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cobound/cli.hpp"
#include "cobound/error.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using cobound::cli::run;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int s = run(args, out, err);
  return {s, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cobound-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("validate: invariance counterexample window at (p, r) = (1.2, 4)") {
  const fs::path dir = scratch("validate");
  const fs::path cfg =
      write_config(dir, R"({"exponents": {"p": "1.2", "r": 4}, "hypotheses": ["invariance-counterexample"]})");
  const Run r = call({"validate", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.status == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "out" / "validate.json"));
  CHECK(doc["reports"][0]["extra"]["alpha_window"][0] == "1/3");
  CHECK(doc["reports"][0]["extra"]["alpha_window"][1] == "2/5");
  const Run bad = call({"validate", "--config", write_config(dir, R"({"exponents": {"p": 1.6, "r": 3},
      "hypotheses": ["invariance-counterexample"]})").string(), "--out", (dir / "out2").string()});
  CHECK(bad.status == 1);
}

TEST_CASE("maximal with B = 21 hits the resource guard") {
  const fs::path dir = scratch("maximal");
  const fs::path cfg = write_config(dir, R"({"preset": "maximal-random", "precision": 21})");
  const Run r = call({"maximal", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.status == 2);
  CHECK(r.err.rfind("error: resource guard", 0) == 0);
}

TEST_CASE("series preset exits 0 with three verdicts") {
  const fs::path dir = scratch("series");
  const Run r = call({"series", "--preset", "series-example", "--out", dir.string()});
  CHECK(r.status == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "series.json"));
  CHECK(doc["main_series"]["verdict"] == "converges");
  CHECK(doc["tail_limit"]["verdict"] == "tends to 0");
  CHECK(doc["quadratic_series"]["verdict"] == "diverges");
}

TEST_CASE("config errors exit 2 with a line-anchored message") {
  const fs::path dir = scratch("errors");
  CHECK(call({"frobnicate"}).status == 2);
  CHECK(call({"series"}).status == 2);
  const Run unknown = call({"series", "--config", write_config(dir, R"({"colour": 3})").string(), "--out", dir.string()});
  CHECK(unknown.status == 2);
  CHECK(unknown.err.rfind("error: ", 0) == 0);
  CHECK(unknown.err.find("colour") != std::string::npos);
  CHECK(call({"series", "--config", write_config(dir, "{not json").string(), "--out", dir.string()}).status == 2);
  CHECK(call({"series", "--config", write_config(dir, R"({"schema_version": 9})").string(), "--out", dir.string()})
            .status == 2);
  CHECK(call({"series", "--preset", "no-such-preset", "--out", dir.string()}).status == 2);
}

TEST_CASE("manifest closes over outputs; payloads do not depend on workers") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, R"({"preset": "clt-rademacher", "paths": 300, "horizons": [512]})");
  REQUIRE(call({"clt", "--config", cfg.string(), "--out", (dir / "a").string(), "--workers", "1"}).status == 0);
  REQUIRE(call({"clt", "--config", cfg.string(), "--out", (dir / "b").string(), "--workers", "4"}).status == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(manifest["subcommand"] == "clt");
  CHECK(manifest["config"]["paths"] == 300);
  std::size_t listed = 0;
  for (const auto& f : manifest["outputs"]) {
    ++listed;
    CHECK(slurp(dir / "a" / f["file"].get<std::string>()) == slurp(dir / "b" / f["file"].get<std::string>()));
  }
  std::size_t on_disk = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) on_disk += e.path().filename() != "manifest.json";
  CHECK(listed == on_disk);
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "clt.json"));
  CHECK(report["config_hash"] == manifest["config_hash"]);

  REQUIRE(call({"clt", "--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "99"}).status == 0);
  const auto other = nlohmann::json::parse(slurp(dir / "c" / "manifest.json"));
  CHECK(other["seed"] == 99);
  CHECK(other["config_hash"] != manifest["config_hash"]);
}

TEST_CASE("presets resolve and user keys override them") {
  for (const std::string& name : cobound::cli::preset_names()) CHECK(cobound::cli::preset(name).is_object());
  const auto r = cobound::cli::resolve_config({{"preset", "series-example"}, {"k_max", 5000}});
  CHECK(r["k_max"] == 5000);
  CHECK(r["exponents"]["p"] == "3/2");
  CHECK(r["schema_version"] == cobound::cli::kSchemaVersion);
  CHECK(cobound::cli::fnv1a("") == 14695981039346656037ull);
  CHECK(cobound::cli::fnv1a("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("counterexample and criteria subcommands write their tables") {
  const fs::path dir = scratch("tables");
  CHECK(call({"counterexample", "--preset", "ip-counterexample", "--out", (dir / "ce").string()}).status == 0);
  CHECK(slurp(dir / "ce" / "norms.csv").rfind("i,n_i,k_i,a_i,", 0) == 0);
  CHECK(fs::exists(dir / "ce" / "norms.dat"));
  CHECK(call({"criteria", "--preset", "f-cosine", "--out", (dir / "cr").string()}).status == 0);
  CHECK(fs::exists(dir / "cr" / "local-energy.csv"));
}
