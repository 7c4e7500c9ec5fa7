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

#pragma once

// Run configuration, subcommand pipelines and dataset emission.

#include "frackix/error.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace frackix::io {

inline constexpr const char* kVersion = "0.4.0";

struct KernelSpec {
  std::string type = "uniform"; // uniform | cosine | vonmises
  double kappa = 0.0;
};

struct GeometrySpec {
  std::string kind = "interval"; // interval | disc
  double extent = 1.0;
};

struct RhoSpec {
  std::string preset = "constant"; // constant | linear | gaussian | cosine
  double amplitude = 0.0;
  double offset = 0.0;
  std::vector<double> gradient{0.0, 0.0};
  std::vector<double> center{0.5, 0.0};
  double width = 0.1;
  double length = 1.0;
};

struct RunConfig {
  std::string subcommand;
  double alpha = 1.5;
  double tau0 = 1.0;
  double tau1 = 0.0;
  double c0 = 1.0;
  double epsilon = 0.1;
  GeometrySpec geometry;
  int N = 128;
  std::optional<double> L; // macro interval length, defaults to the extent
  KernelSpec kernel;
  RhoSpec rho;
  double horizon = 1.0;
  std::vector<double> snapshots; // empty: {horizon}
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::uint64_t particles = 100000;
  int bins = 0; // 0: N
  std::optional<double> start;
  double start_width = 0.0;
  std::optional<double> strip_width;
  std::optional<double> diffusivity;
  std::string side = "symmetric";
  std::string time_scheme = "explicit";
  double dt = 0.0;
  int ordinates = 32;
  std::string ordinate_rule = "gauss";
  double r_max = 20.0;
  std::string prompt = "specular";
  std::optional<double> layer_coefficient; // kappa override, needed at alpha = 2
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::string field = "wavy"; // curved: radial | wavy | layer
  std::vector<int> panels{3, 6, 12, 24};
  int quadrature_order = 6;
  int threads = 0;
  bool timing = false;
  bool dump_operator = false;

  double length() const { return L.value_or(geometry.extent); }
  std::vector<double> snapshot_times() const;
};

/// Strict parse: unknown keys (with a closest-match suggestion), type errors
/// and range violations are all collected before a single Validation error
/// is thrown. Malformed JSON raises a Parse error with the byte offset.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Normalized echo of a parsed config, defaults filled; parse_config of the
/// dump reproduces the same config.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

struct Dataset {
  std::string name; // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

/// name.csv (header row, %.17g values) and name.json alongside.
void emit_dataset(const Dataset& ds, const std::string& dir);

/// Report file name.json only.
void emit_report(const std::string& name, const nlohmann::ordered_json& report,
                 const std::string& dir);

struct RunResult {
  std::vector<std::string> files;
  nlohmann::ordered_json report;
};

/// Dispatch on cfg.subcommand: spectra | mc | macro | milne | match | curved.
RunResult run(const RunConfig& cfg);

/// Levenshtein distance, used for key suggestions.
std::size_t edit_distance(const std::string& a, const std::string& b);

} // namespace frackix::io
