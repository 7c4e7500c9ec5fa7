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

// frackix <subcommand> --config <file> [--seed N] [--out DIR]
//         [--dump-operator] [--timing]
//
// Talks to the library only through the C interface. Failures print one JSON
// line {"error", "code", "message"} on stderr and exit with the status code.

#include "frackix/frackix.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

int report_failure(frackix_status s) {
  nlohmann::ordered_json j;
  j["error"] = frackix_status_name(s);
  j["code"] = static_cast<int>(s);
  j["message"] = frackix_last_error();
  std::cerr << j.dump() << "\n";
  return static_cast<int>(s);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"frackix: fractional chemotaxis laboratory"};
  app.set_version_flag("--version", std::string(frackix_version()));
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool dump_operator = false;
  bool timing = false;

  const char* names[][2] = {
      {"spectra", "kernel eigenvalue, scaling exponents and macroscopic constants"},
      {"mc", "Monte Carlo velocity-jump ensemble"},
      {"macro", "macroscopic fractional chemotaxis solve"},
      {"milne", "half-space layer: albedo, reflection operators, Theta, H"},
      {"match", "Monte Carlo vs macroscopic comparison across epsilon"},
      {"curved", "curved-strip conservation identity"}};
  for (auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--out", out, "override the output directory");
    sub->add_flag("--dump-operator", dump_operator, "write the discrete operators (macro)");
    sub->add_flag("--timing", timing, "also write timing.json with the wall time");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  frackix_config* cfg = nullptr;
  frackix_status s = frackix_config_load(config.c_str(), &cfg);
  if (s != FRACKIX_OK) return report_failure(s);
  if (s == FRACKIX_OK && seed) s = frackix_config_set_seed(cfg, *seed);
  if (s == FRACKIX_OK && !out.empty()) s = frackix_config_set_output_dir(cfg, out.c_str());
  if (s == FRACKIX_OK) s = frackix_config_set_flags(cfg, timing, dump_operator);
  frackix_result* result = nullptr;
  if (s == FRACKIX_OK) s = frackix_run(cfg, subcommand.c_str(), &result);
  frackix_config_free(cfg);
  if (s != FRACKIX_OK) return report_failure(s);

  for (size_t i = 0; i < frackix_result_file_count(result); ++i)
    std::cout << frackix_result_file(result, i) << "\n";
  frackix_result_free(result);
  return 0;
}
