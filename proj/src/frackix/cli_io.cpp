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

#include "frackix/cli_io.hpp"

#include "frackix/format.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace frackix::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::vector<double> RunConfig::snapshot_times() const {
  return snapshots.empty() ? std::vector<double>{horizon} : snapshots;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

struct Violations {
  std::vector<std::string> items;
  void add(const std::string& key, const std::string& msg) {
    items.push_back("'" + key + "': " + msg);
  }
};

using Handler = std::function<void(const json&, const std::string&, Violations&)>;

std::string suggest(const std::string& key, const std::map<std::string, Handler>& known) {
  std::string best;
  std::size_t dist = 3;
  for (const auto& [k, _] : known) {
    const std::size_t d = edit_distance(key, k);
    if (d < dist) {
      dist = d;
      best = k;
    }
  }
  return best;
}

void parse_object(const json& j, const std::string& prefix,
                  const std::map<std::string, Handler>& known, Violations& v) {
  if (!j.is_object()) {
    v.add(prefix.empty() ? "<root>" : prefix, "expected an object");
    return;
  }
  for (const auto& [key, value] : j.items()) {
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    auto it = known.find(key);
    if (it == known.end()) {
      std::string hint = suggest(key, known);
      v.add(full, "unknown key" + (hint.empty() ? std::string() : "; did you mean '" +
                                   (prefix.empty() ? hint : prefix + "." + hint) + "'?"));
      continue;
    }
    it->second(value, full, v);
  }
}

Handler real(double& out) {
  return [&out](const json& j, const std::string& key, Violations& v) {
    if (!j.is_number()) return v.add(key, "expected a number");
    out = j.get<double>();
    if (!std::isfinite(out)) v.add(key, "must be finite");
  };
}

Handler opt_real(std::optional<double>& out) {
  return [&out](const json& j, const std::string& key, Violations& v) {
    if (j.is_null()) {
      out.reset();
      return;
    }
    if (!j.is_number()) return v.add(key, "expected a number or null");
    out = j.get<double>();
  };
}

Handler integer(int& out) {
  return [&out](const json& j, const std::string& key, Violations& v) {
    if (!j.is_number_integer()) return v.add(key, "expected an integer");
    const auto x = j.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) return v.add(key, "out of range");
    out = static_cast<int>(x);
  };
}

Handler unsigned64(std::uint64_t& out) {
  return [&out](const json& j, const std::string& key, Violations& v) {
    if (j.is_number_unsigned()) {
      out = j.get<std::uint64_t>();
    } else if (j.is_number_integer()) {
      v.add(key, "must be non-negative");
    } else {
      v.add(key, "expected an unsigned 64-bit integer");
    }
  };
}

Handler string_value(std::string& out) {
  return [&out](const json& j, const std::string& key, Violations& v) {
    if (!j.is_string()) return v.add(key, "expected a string");
    out = j.get<std::string>();
  };
}

template <class T>
Handler list(std::vector<T>& out) {
  return [&out](const json& j, const std::string& key, Violations& v) {
    if (!j.is_array()) return v.add(key, "expected an array");
    out.clear();
    for (const auto& e : j) {
      if constexpr (std::is_same_v<T, int>) {
        if (!e.is_number_integer()) return v.add(key, "expected integers");
      } else {
        if (!e.is_number()) return v.add(key, "expected numbers");
      }
      out.push_back(e.get<T>());
    }
  };
}

void one_of(const std::string& value, std::initializer_list<const char*> allowed,
            const std::string& key, Violations& v) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string msg = "must be one of";
  for (const char* a : allowed) msg += std::string(" '") + a + "'";
  v.add(key, msg + " (got '" + value + "')");
}

void validate(const RunConfig& c, Violations& v) {
  if (!(c.alpha > 1.0 && c.alpha <= 2.0)) v.add("alpha", "must lie in (1, 2]");
  if (!(c.tau0 > 0.0)) v.add("tau0", "must be > 0");
  if (!(c.c0 > 0.0)) v.add("c0", "must be > 0");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) v.add("epsilon", "must lie in (0, 1)");
  one_of(c.geometry.kind, {"interval", "disc"}, "geometry.kind", v);
  if (!(c.geometry.extent > 0.0)) v.add("geometry.extent", "must be > 0");
  if (c.N < 4) v.add("N", "must be >= 4");
  if (c.L && !(*c.L > 0.0)) v.add("L", "must be > 0");
  one_of(c.kernel.type, {"uniform", "cosine", "vonmises"}, "kernel.type", v);
  if (!(c.kernel.kappa >= 0.0)) v.add("kernel.kappa", "must be >= 0");
  one_of(c.rho.preset, {"constant", "linear", "gaussian", "cosine"}, "rho.preset", v);
  if (c.rho.gradient.empty() || c.rho.gradient.size() > 2)
    v.add("rho.gradient", "needs 1 or 2 components");
  if (c.rho.center.empty() || c.rho.center.size() > 2)
    v.add("rho.center", "needs 1 or 2 components");
  if (!(c.rho.width > 0.0)) v.add("rho.width", "must be > 0");
  if (!(c.rho.length > 0.0)) v.add("rho.length", "must be > 0");
  if (!(c.horizon > 0.0)) v.add("horizon", "must be > 0");
  double prev = 0.0;
  for (double t : c.snapshots) {
    if (!(t > prev && t <= c.horizon)) {
      v.add("snapshots", "must be strictly increasing in (0, horizon]");
      break;
    }
    prev = t;
  }
  if (c.particles < 1) v.add("particles", "must be >= 1");
  if (c.bins < 0) v.add("bins", "must be >= 1 (0 selects N)");
  if (c.start && !(*c.start >= 0.0 && *c.start <= c.geometry.extent))
    v.add("start", "must lie in the domain");
  if (!(c.start_width >= 0.0)) v.add("start_width", "must be >= 0");
  if (c.strip_width && !(*c.strip_width > 0.0)) v.add("strip_width", "must be > 0");
  if (c.diffusivity && !(*c.diffusivity > 0.0)) v.add("diffusivity", "must be > 0");
  if (c.layer_coefficient && !(*c.layer_coefficient >= 0.0))
    v.add("layer_coefficient", "must be >= 0");
  one_of(c.side, {"symmetric", "left", "right"}, "operator", v);
  one_of(c.time_scheme, {"explicit", "imex"}, "time_scheme", v);
  if (!(c.dt >= 0.0)) v.add("dt", "must be >= 0 (0 picks the stable step)");
  if (c.ordinates < 4 || c.ordinates % 4 != 0)
    v.add("ordinates", "must be a positive multiple of 4");
  one_of(c.ordinate_rule, {"gauss", "circle"}, "ordinate_rule", v);
  if (!(c.r_max >= 2.0)) v.add("r_max", "must be >= 2 layer scales");
  one_of(c.prompt, {"specular", "diffuse"}, "prompt", v);
  if (c.epsilons.empty()) v.add("epsilons", "must not be empty");
  for (double e : c.epsilons)
    if (!(e > 0.0 && e < 1.0)) {
      v.add("epsilons", "entries must lie in (0, 1)");
      break;
    }
  one_of(c.field, {"radial", "wavy", "layer"}, "field", v);
  if (c.panels.empty()) v.add("panels", "must not be empty");
  for (int p : c.panels)
    if (p < 1) {
      v.add("panels", "entries must be >= 1");
      break;
    }
  if (c.quadrature_order < 1 || c.quadrature_order > 64)
    v.add("quadrature_order", "must lie in [1, 64]");
  if (c.threads < 0) v.add("threads", "must be >= 0");
}

} // namespace

RunConfig parse_config(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::Parse,
         "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  RunConfig c;
  Violations v;

  const std::map<std::string, Handler> geometry{
      {"kind", string_value(c.geometry.kind)}, {"extent", real(c.geometry.extent)}};
  const std::map<std::string, Handler> kernel{
      {"type", string_value(c.kernel.type)}, {"kappa", real(c.kernel.kappa)}};
  const std::map<std::string, Handler> rho{
      {"preset", string_value(c.rho.preset)},     {"amplitude", real(c.rho.amplitude)},
      {"offset", real(c.rho.offset)},     {"gradient", list(c.rho.gradient)},
      {"center", list(c.rho.center)},     {"width", real(c.rho.width)},
      {"length", real(c.rho.length)}};
  auto nested = [](const std::map<std::string, Handler>& m) -> Handler {
    return [&m](const json& j, const std::string& key, Violations& vv) {
      parse_object(j, key, m, vv);
    };
  };
  const std::map<std::string, Handler> top{
      {"alpha", real(c.alpha)},
      {"tau0", real(c.tau0)},
      {"tau1", real(c.tau1)},
      {"c0", real(c.c0)},
      {"epsilon", real(c.epsilon)},
      {"geometry", nested(geometry)},
      {"N", integer(c.N)},
      {"L", opt_real(c.L)},
      {"kernel", nested(kernel)},
      {"rho", nested(rho)},
      {"horizon", real(c.horizon)},
      {"snapshots", list(c.snapshots)},
      {"seed", unsigned64(c.seed)},
      {"output_dir", string_value(c.output_dir)},
      {"particles", unsigned64(c.particles)},
      {"bins", integer(c.bins)},
      {"start", opt_real(c.start)},
      {"start_width", real(c.start_width)},
      {"strip_width", opt_real(c.strip_width)},
      {"diffusivity", opt_real(c.diffusivity)},
      {"layer_coefficient", opt_real(c.layer_coefficient)},
      {"operator", string_value(c.side)},
      {"time_scheme", string_value(c.time_scheme)},
      {"dt", real(c.dt)},
      {"ordinates", integer(c.ordinates)},
      {"ordinate_rule", string_value(c.ordinate_rule)},
      {"r_max", real(c.r_max)},
      {"prompt", string_value(c.prompt)},
      {"epsilons", list(c.epsilons)},
      {"field", string_value(c.field)},
      {"panels", list(c.panels)},
      {"quadrature_order", integer(c.quadrature_order)},
      {"threads", integer(c.threads)},
  };
  parse_object(j, "", top, v);
  validate(c, v);
  if (!v.items.empty()) {
    std::string msg = std::to_string(v.items.size()) + " configuration error(s):";
    for (const auto& s : v.items) msg += "\n  " + s;
    fail(ErrorCategory::Validation, msg);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCategory::Io, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ojson config_to_json(const RunConfig& c) {
  auto opt = [](const std::optional<double>& x) -> ojson {
    return x ? ojson(*x) : ojson(nullptr);
  };
  ojson j;
  j["alpha"] = c.alpha;
  j["tau0"] = c.tau0;
  j["tau1"] = c.tau1;
  j["c0"] = c.c0;
  j["epsilon"] = c.epsilon;
  j["geometry"] = {{"kind", c.geometry.kind}, {"extent", c.geometry.extent}};
  j["N"] = c.N;
  j["L"] = opt(c.L);
  j["kernel"] = {{"type", c.kernel.type}, {"kappa", c.kernel.kappa}};
  j["rho"] = {{"preset", c.rho.preset},   {"amplitude", c.rho.amplitude},
              {"offset", c.rho.offset},   {"gradient", c.rho.gradient},
              {"center", c.rho.center},   {"width", c.rho.width},
              {"length", c.rho.length}};
  j["horizon"] = c.horizon;
  j["snapshots"] = c.snapshots;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["particles"] = c.particles;
  j["bins"] = c.bins;
  j["start"] = opt(c.start);
  j["start_width"] = c.start_width;
  j["strip_width"] = opt(c.strip_width);
  j["diffusivity"] = opt(c.diffusivity);
  j["layer_coefficient"] = opt(c.layer_coefficient);
  j["operator"] = c.side;
  j["time_scheme"] = c.time_scheme;
  j["dt"] = c.dt;
  j["ordinates"] = c.ordinates;
  j["ordinate_rule"] = c.ordinate_rule;
  j["r_max"] = c.r_max;
  j["prompt"] = c.prompt;
  j["epsilons"] = c.epsilons;
  j["field"] = c.field;
  j["panels"] = c.panels;
  j["quadrature_order"] = c.quadrature_order;
  j["threads"] = c.threads;
  return j;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCategory::Io, "cannot write " + path.string());
  out << body;
  out.close();
  require(!out.fail(), ErrorCategory::Io, "write failed for " + path.string());
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCategory::Io, "cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

} // namespace

void emit_dataset(const Dataset& ds, const std::string& dir) {
  for (const auto& row : ds.rows)
    require(row.size() == ds.columns.size(), ErrorCategory::Internal,
            "dataset " + ds.name + " is not rectangular");
  const auto base = prepare_dir(dir);
  std::string body;
  for (std::size_t i = 0; i < ds.columns.size(); ++i)
    body += (i ? "," : "") + csv_field(ds.columns[i]);
  body += "\r\n";
  for (const auto& row : ds.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      body += (i ? "," : "") + format_double(row[i]);
    body += "\r\n";
  }
  write_file(base / (ds.name + ".csv"), body);
  ojson side = ds.metadata;
  side["columns"] = ds.columns;
  side["rows"] = ds.rows.size();
  write_file(base / (ds.name + ".json"), side.dump(2) + "\n");
}

void emit_report(const std::string& name, const ojson& report, const std::string& dir) {
  const auto base = prepare_dir(dir);
  write_file(base / (name + ".json"), report.dump(2) + "\n");
}

} // namespace frackix::io
