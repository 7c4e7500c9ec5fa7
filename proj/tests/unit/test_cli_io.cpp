// Copyright 2026 The frackix Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frackix/cli_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace frackix;
using namespace frackix::io;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("frackix_cli_io_" + name);
  fs::remove_all(p);
  return p;
}

ErrorCategory category_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.category();
  }
  return ErrorCategory::Internal;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("empty config takes the documented defaults") {
  auto c = parse_config("{}");
  CHECK(c.alpha == 1.5);
  CHECK(c.tau0 == 1.0);
  CHECK(c.epsilon == 0.1);
  CHECK(c.geometry.kind == "interval");
  CHECK(c.kernel.type == "uniform");
  CHECK(c.seed == 1);
  CHECK(c.snapshot_times() == std::vector<double>{1.0});
  CHECK(c.ordinates == 32);
  CHECK(c.length() == 1.0);
}

TEST_CASE("range violations name the key") {
  CHECK(category_of(R"({"alpha": 2.5})") == ErrorCategory::Validation);
  CHECK(message_of(R"({"alpha": 2.5})").find("'alpha'") != std::string::npos);
  CHECK(message_of(R"({"epsilon": 1.0})").find("'epsilon'") != std::string::npos);
  CHECK(message_of(R"({"geometry": {"extent": 0}})").find("'geometry.extent'") != std::string::npos);
  CHECK_NOTHROW(parse_config(R"({"alpha": 2.0})"));
}

TEST_CASE("unknown keys are rejected with a suggestion") {
  auto m = message_of(R"({"alpa": 1.5})");
  CHECK(m.find("'alpa'") != std::string::npos);
  CHECK(m.find("did you mean 'alpha'") != std::string::npos);
  auto n = message_of(R"({"kernel": {"kapa": 2}})");
  CHECK(n.find("'kernel.kappa'") != std::string::npos);
  CHECK(message_of(R"({"zzzzzzzz": 1})").find("did you mean") == std::string::npos);
}

TEST_CASE("every violation is reported") {
  auto m = message_of(R"({"alpa": 1, "tau0": -1, "c0": "fast", "kernel": {"type": "box"}, "seed": -3})");
  CHECK(m.find("5 configuration error(s)") != std::string::npos);
  for (const char* key : {"'alpa'", "'tau0'", "'c0'", "'kernel.type'", "'seed'"})
    CHECK(m.find(key) != std::string::npos);
}

TEST_CASE("malformed JSON is a parse error with its position") {
  CHECK(category_of("{\"alpha\": 1.5,") == ErrorCategory::Parse);
  CHECK(message_of("{\"alpha\": 1.5,").find("byte") != std::string::npos);
  CHECK(category_of("[1, 2]") == ErrorCategory::Validation);
}

TEST_CASE("seeds cover the full unsigned 64-bit range") {
  auto c = parse_config(R"({"seed": 18446744073709551615})");
  CHECK(c.seed == 18446744073709551615ull);
}

TEST_CASE("config echo round-trips") {
  auto c = parse_config(R"({"alpha": 1.7, "kernel": {"type": "vonmises", "kappa": 2.5},
                            "rho": {"preset": "gaussian", "center": [0.3, 0.1]},
                            "snapshots": [0.1, 0.5], "horizon": 0.5, "start": 0.25,
                            "diffusivity": 0.8})");
  const auto j = config_to_json(c);
  auto d = parse_config(j.dump());
  CHECK(config_to_json(d).dump() == j.dump());
  CHECK(d.start.value() == 0.25);
  CHECK(d.kernel.kappa == 2.5);
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("alpha", "alpha") == 0);
  CHECK(edit_distance("alpa", "alpha") == 1);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
}

TEST_CASE("datasets: header-only, round-trip digits, sidecar") {
  const auto dir = scratch("ds");
  Dataset empty;
  empty.name = "empty";
  empty.columns = {"a", "b,c"};
  emit_dataset(empty, dir.string());
  CHECK(slurp(dir / "empty.csv") == "a,\"b,c\"\r\n");

  Dataset ds;
  ds.name = "values";
  ds.columns = {"x"};
  ds.rows = {{0.1}, {1.0 / 3.0}, {-2.5e-300}};
  ds.metadata["seed"] = 99;
  emit_dataset(ds, dir.string());
  std::istringstream csv(slurp(dir / "values.csv"));
  std::string line;
  std::getline(csv, line);
  for (double expect : {0.1, 1.0 / 3.0, -2.5e-300}) {
    std::getline(csv, line);
    CHECK(std::strtod(line.c_str(), nullptr) == expect);
  }
  auto side = nlohmann::json::parse(slurp(dir / "values.json"));
  CHECK(side["seed"] == 99);
  CHECK(side["rows"] == 3);

  Dataset ragged;
  ragged.name = "ragged";
  ragged.columns = {"x", "y"};
  ragged.rows = {{1.0}};
  CHECK_THROWS_AS(emit_dataset(ragged, dir.string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("unwritable output is an I/O error") {
  const auto file = scratch("blocker");
  std::ofstream(file) << "x";
  Dataset ds;
  ds.name = "d";
  ds.columns = {"x"};
  try {
    emit_dataset(ds, (file / "sub").string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Io);
  }
  fs::remove(file);
}

TEST_CASE("spectra with the cosine kernel") {
  auto c = parse_config(R"({"geometry": {"kind": "disc"}, "kernel": {"type": "cosine"},
                            "tau1": 0.5})");
  c.subcommand = "spectra";
  const auto dir = scratch("spectra");
  c.output_dir = dir.string();
  auto r = run(c);
  CHECK(std::abs(r.report["nu1"].get<double>() - 0.5) <= 1e-10);
  CHECK(r.report["C_alpha"].get<double>() > 0.0);
  CHECK(r.report["chi"].get<double>() == doctest::Approx(0.25));
  CHECK(r.report["varrho_minus_2mu"].get<double>() == 1.0);
  CHECK(fs::exists(dir / "spectra_report.json"));
  fs::remove_all(dir);
}

TEST_CASE("pipelines are deterministic byte for byte") {
  const char* cfg = R"({"particles": 3000, "N": 20, "horizon": 0.05,
                        "snapshots": [0.02, 0.05], "tau1": 0.2,
                        "rho": {"preset": "linear", "gradient": [1, 0]},
                        "start_width": 0.3, "seed": 5})";
  for (const char* sub : {"mc", "macro", "curved"}) {
    auto c = parse_config(cfg);
    c.subcommand = sub;
    if (std::string(sub) == "curved") c.geometry = {"disc", 1.0};
    const auto dir = scratch(std::string("det_") + sub);
    c.output_dir = dir.string();
    auto ra = run(c);
    std::vector<std::string> first;
    for (const auto& f : ra.files) first.push_back(slurp(dir / f));
    auto rb = run(c);
    REQUIRE(ra.files == rb.files);
    for (std::size_t i = 0; i < ra.files.size(); ++i) CHECK(slurp(dir / ra.files[i]) == first[i]);
    fs::remove_all(dir);
  }
}

TEST_CASE("seed changes the Monte Carlo output") {
  auto c = parse_config(R"({"particles": 2000, "N": 10, "horizon": 0.05})");
  c.subcommand = "mc";
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  c.output_dir = a.string();
  run(c);
  c.seed = 2;
  c.output_dir = b.string();
  run(c);
  CHECK(slurp(a / "mc.csv") != slurp(b / "mc.csv"));
  CHECK(nlohmann::json::parse(slurp(b / "mc.json"))["seed"] == 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("macro operator dump and the alpha = 2 diffusivity") {
  auto c = parse_config(R"({"N": 16, "horizon": 0.01})");
  c.subcommand = "macro";
  c.dump_operator = true;
  const auto dir = scratch("macro");
  c.output_dir = dir.string();
  run(c);
  CHECK(fs::exists(dir / "operator_divgrad.csv"));
  CHECK(fs::exists(dir / "operator_gradient.csv"));

  auto two = parse_config(R"({"alpha": 2.0, "N": 16, "horizon": 0.01})");
  two.subcommand = "macro";
  two.output_dir = dir.string();
  try {
    run(two);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Domain);
  }
  two.diffusivity = 1.0;
  CHECK_NOTHROW(run(two));
  fs::remove_all(dir);
}

TEST_CASE("unknown subcommand") {
  auto c = parse_config("{}");
  c.subcommand = "plot";
  CHECK_THROWS_AS(run(c), Error);
}
