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

#include "frackix/boundary_layer.hpp"
#include "frackix/cli_io.hpp"
#include "frackix/frac_ops.hpp"
#include "frackix/kinetic_core.hpp"
#include "frackix/macro_solver.hpp"
#include "frackix/mc_simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>

namespace frackix::io {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

int dimension_of(const RunConfig& c) { return c.geometry.kind == "disc" ? 2 : 1; }

kinetic::TurnKernel make_kernel(const KernelSpec& k, int n) {
  if (k.type == "cosine") return kinetic::TurnKernel::cosine(n);
  if (k.type == "vonmises") return kinetic::TurnKernel::von_mises(n, k.kappa);
  return kinetic::TurnKernel::uniform(n);
}

Vec2 vec(const std::vector<double>& v) {
  return {v.empty() ? 0.0 : v[0], v.size() > 1 ? v[1] : 0.0};
}

kinetic::ChemicalField make_field(const RhoSpec& r) {
  if (r.preset == "linear") return kinetic::ChemicalField::linear(r.offset, vec(r.gradient));
  if (r.preset == "gaussian")
    return kinetic::ChemicalField::gaussian(r.amplitude, vec(r.center), r.width);
  if (r.preset == "cosine") return kinetic::ChemicalField::cosine(r.amplitude, r.length);
  return kinetic::ChemicalField::constant(r.offset);
}

mc::DomainGeometry make_geometry(const RunConfig& c) {
  return c.geometry.kind == "disc" ? mc::DomainGeometry::disc(c.geometry.extent)
                                   : mc::DomainGeometry::interval(c.geometry.extent);
}

kinetic::ModelParams model(const RunConfig& c, double epsilon) {
  return kinetic::ModelParams::make(c.alpha, c.tau0, c.tau1, c.c0, epsilon);
}

struct Constants {
  double nu1;
  double C_alpha;
  double chi;
};

Constants constants(const RunConfig& c, const kinetic::TurnKernel& kernel, int n) {
  Constants k;
  k.nu1 = kinetic::eigenvalue_nu1(kernel);
  k.chi = c.tau1 * c.c0 / (n * c.tau0);
  if (c.diffusivity) {
    k.C_alpha = *c.diffusivity;
  } else {
    require(c.alpha < 2.0, ErrorCategory::Domain,
            "alpha = 2: C_alpha has a Gamma(1 - alpha) pole; set 'diffusivity'");
    k.C_alpha = kinetic::macro_constants(model(c, c.epsilon), k.nu1, n).C_alpha;
  }
  return k;
}

ojson metadata(const RunConfig& c) {
  ojson m;
  m["version"] = kVersion;
  m["subcommand"] = c.subcommand;
  m["seed"] = c.seed;
  m["config"] = config_to_json(c);
  return m;
}

std::string out_dir(const RunConfig& c) { return c.output_dir; }

// Cell averages of the uniform initial cloud on [s - w/2, s + w/2], mass 1.
std::vector<double> initial_cells(const RunConfig& c, const macro::Grid1D& g) {
  const double s = c.start.value_or(0.5 * g.length);
  std::vector<double> u(g.cells, 0.0);
  if (c.start_width == 0.0) {
    const int i = std::clamp(static_cast<int>(std::floor(s / g.h)), 0, g.cells - 1);
    u[i] = 1.0 / g.h;
    return u;
  }
  const double a = std::max(0.0, s - 0.5 * c.start_width);
  const double b = std::min(g.length, s + 0.5 * c.start_width);
  require(b > a, ErrorCategory::Configuration, "initial cloud lies outside the domain");
  for (int i = 0; i < g.cells; ++i) {
    const double lo = std::max(a, g.face(i)), hi = std::min(b, g.face(i + 1));
    if (hi > lo) u[i] = (hi - lo) / ((b - a) * g.h);
  }
  return u;
}

// ---------------------------------------------------------------- spectra

RunResult run_spectra(const RunConfig& c) {
  const int n = dimension_of(c);
  const auto kernel = make_kernel(c.kernel, n);
  const auto quad = kinetic::SphereQuadrature::make(n, kinetic::kEigenQuadratureNodes);
  const auto k = constants(c, kernel, n);
  const auto e = kinetic::scaling_exponents(c.alpha);

  ojson r = metadata(c);
  r["kernel"] = kernel.name();
  r["dimension"] = n;
  r["normalization"] = kinetic::kernel_normalization(kernel, quad);
  r["nu1"] = k.nu1;
  r["C_alpha"] = k.C_alpha;
  r["chi"] = k.chi;
  r["mu"] = e.mu;
  r["varrho"] = e.varrho;
  r["varrho_minus_2mu"] = e.varrho - 2.0 * e.mu;
  r["sphere_area"] = kinetic::sphere_area(n);
  if (c.alpha < 2.0) {
    const double g = kinetic::gamma_reflection(c.alpha);
    r["gamma_identity_error"] =
        std::abs(g * std::sin(kPi * c.alpha) * std::tgamma(c.alpha) / kPi - 1.0);
  }

  Dataset ds;
  ds.name = "spectra";
  ds.columns = {"kernel_index", "nu1", "normalization"};
  ojson names = ojson::array();
  std::vector<kinetic::TurnKernel> shipped{kinetic::TurnKernel::uniform(n),
                                           kinetic::TurnKernel::cosine(n),
                                           kinetic::TurnKernel::von_mises(n, std::max(c.kernel.kappa, 1.0))};
  for (std::size_t i = 0; i < shipped.size(); ++i) {
    names.push_back(shipped[i].name());
    ds.rows.push_back({static_cast<double>(i), kinetic::eigenvalue_nu1(shipped[i]),
                       kinetic::kernel_normalization(shipped[i], quad)});
  }
  ds.metadata = metadata(c);
  ds.metadata["kernels"] = names;
  emit_dataset(ds, out_dir(c));
  emit_report("spectra_report", r, out_dir(c));
  return {{"spectra.csv", "spectra.json", "spectra_report.json"}, r};
}

// --------------------------------------------------------------------- mc

mc::EnsembleConfig ensemble(const RunConfig& c, double epsilon) {
  mc::EnsembleConfig e;
  e.particles = c.particles;
  e.horizon = c.horizon;
  e.snapshot_times = c.snapshot_times();
  e.params = model(c, epsilon);
  e.kernel = make_kernel(c.kernel, dimension_of(c));
  e.geometry = make_geometry(c);
  e.field = make_field(c.rho);
  if (c.start) e.start = *c.start;
  e.start_width = c.start_width;
  e.bins = c.bins > 0 ? c.bins : c.N;
  e.strip_width = c.strip_width.value_or(0.0);
  e.seed = c.seed;
  e.threads = c.threads;
  return e;
}

RunResult run_mc(const RunConfig& c) {
  const auto res = mc::simulate_ensemble(ensemble(c, c.epsilon));
  Dataset ds;
  ds.name = "mc";
  ds.columns = {"time", "bin_center", "count", "density"};
  for (const auto& h : res.snapshots) {
    const auto d = h.density();
    for (int i = 0; i < h.bins(); ++i)
      ds.rows.push_back({h.time, h.bin_center(i), static_cast<double>(h.counts[i]), d[i]});
  }
  ds.metadata = metadata(c);
  ds.metadata["tumbles"] = res.tumbles;
  ds.metadata["strip_counts"] = res.strip_counts;
  ds.metadata["particles"] = c.particles;
  emit_dataset(ds, out_dir(c));
  return {{"mc.csv", "mc.json"}, ds.metadata};
}

// ------------------------------------------------------------------ macro

macro::MacroProblem macro_problem(const RunConfig& c) {
  require(c.geometry.kind == "interval", ErrorCategory::Configuration,
          "the macroscopic solver is one-dimensional (geometry.kind = interval)");
  const auto kernel = make_kernel(c.kernel, 1);
  const auto k = constants(c, kernel, 1);
  macro::MacroProblem p;
  p.alpha = c.alpha;
  p.dimension = 1;
  p.c0 = c.c0;
  p.C_alpha = k.C_alpha;
  p.chi = k.chi;
  p.grid = macro::Grid1D::make(c.N, c.length());
  p.rho = make_field(c.rho);
  p.side = frac::parse_side(c.side);
  p.scheme = c.time_scheme == "imex" ? macro::TimeScheme::Imex : macro::TimeScheme::Explicit;
  return p;
}

RunResult run_macro(const RunConfig& c) {
  const macro::MacroSolver solver(macro_problem(c));
  const auto& g = solver.problem().grid;
  const auto u0 = initial_cells(c, g);
  const auto snaps = solver.solve(u0, c.horizon, c.snapshot_times(), c.dt);
  Dataset ds;
  ds.name = "macro";
  ds.columns = {"time", "x", "u"};
  ojson mass = ojson::array();
  for (const auto& s : snaps) {
    for (int i = 0; i < g.cells; ++i) ds.rows.push_back({s.time, g.center(i), s.values[i]});
    mass.push_back(macro::total_mass(s.values, g.h));
  }
  ds.metadata = metadata(c);
  ds.metadata["C_alpha"] = solver.problem().C_alpha;
  ds.metadata["chi"] = solver.problem().chi;
  ds.metadata["initial_mass"] = macro::total_mass(u0, g.h);
  ds.metadata["mass"] = mass;
  emit_dataset(ds, out_dir(c));
  std::vector<std::string> files{"macro.csv", "macro.json"};
  if (c.dump_operator) {
    const std::filesystem::path dir(out_dir(c));
    frac::write_operator_csv(solver.gradient(), (dir / "operator_gradient.csv").string());
    frac::write_operator_csv(solver.divgrad(), (dir / "operator_divgrad.csv").string());
    files.push_back("operator_gradient.csv");
    files.push_back("operator_divgrad.csv");
  }
  return {files, ds.metadata};
}

// ------------------------------------------------------------------ milne

RunResult run_milne(const RunConfig& c) {
  layer::LayerParams lp;
  lp.alpha = c.alpha;
  lp.tau0 = c.tau0;
  lp.c0 = c.c0;
  lp.kernel = make_kernel(c.kernel, 2);
  lp.fractional_coefficient = c.layer_coefficient;
  const auto rule = c.ordinate_rule == "circle" ? layer::OrdinateRule::Circle
                                                : layer::OrdinateRule::HalfRangeGauss;
  const double scale = c.c0 * c.tau0 / (c.alpha - 1.0);
  const auto op = layer::build_transport_operator(
      lp, layer::OrdinateSet::make(rule, c.ordinates), layer::HalfSpaceGrid::graded(scale, c.r_max));
  const auto& o = op.ordinates;
  const auto albedo = layer::extract_albedo(op);
  const auto kind = c.prompt == "diffuse" ? layer::PromptKind::Diffuse : layer::PromptKind::Specular;
  const auto P = layer::prompt_matrix(o, kind);
  const auto theta = layer::theta_nullspace(albedo, P, o);
  const auto a0 = layer::recover_a0(1.0, theta.theta, albedo.W, o);
  const auto k = constants(c, lp.kernel, 2);
  const Vec2 grad = make_field(c.rho).grad_rho({0.0, 0.0});
  const auto H = layer::boundary_operator_H(k.C_alpha, k.chi, kind, c.ordinates, grad, rule);

  std::vector<double> lin;
  for (int q : o.incoming) lin.push_back(o.mu[q]);
  const auto sol = layer::solve_halfspace(op, lin);
  const auto J = layer::flux_moment(o, sol);

  const int h = static_cast<int>(o.incoming.size());
  double sumW = 0.0, maxG = 0.0, r1 = 0.0;
  for (int b = 0; b < h; ++b) sumW += albedo.W[b] * o.weights[o.incoming[b]];
  for (int q = 0; q < albedo.G0.rows(); ++q) {
    double s = 0.0;
    for (int b = 0; b < h; ++b) s += albedo.G0(q, b) * o.weights[o.incoming[b]];
    maxG = std::max(maxG, std::abs(s));
  }
  for (double x : layer::reflection_R(albedo, o, std::vector<double>(h, 1.0)))
    r1 = std::max(r1, std::abs(x - 1.0));
  auto [jlo, jhi] = std::minmax_element(J.begin(), J.end());

  ojson meta = metadata(c);
  Dataset W;
  W.name = "milne_W";
  W.columns = {"angle", "mu", "weight", "W", "theta"};
  for (int b = 0; b < h; ++b) {
    const int q = o.incoming[b];
    W.rows.push_back({std::atan2(o.nodes[q].y, o.nodes[q].x), o.mu[q], o.weights[q],
                      albedo.W[b], theta.theta[b]});
  }
  W.metadata = meta;
  Dataset G;
  G.name = "milne_G";
  G.columns = {"incoming_angle", "outgoing_angle", "G0", "R"};
  for (int b = 0; b < h; ++b)
    for (int a = 0; a < albedo.G0.rows(); ++a) {
      const Vec2 vi = o.nodes[o.incoming[b]], vo = o.nodes[o.outgoing[a]];
      G.rows.push_back({std::atan2(vi.y, vi.x), std::atan2(vo.y, vo.x), albedo.G0(a, b),
                        albedo.R(a, b)});
    }
  G.metadata = meta;
  Dataset F;
  F.name = "milne_flux";
  F.columns = {"r", "flux", "deviation"};
  for (int i = 0; i < op.grid.size(); ++i)
    F.rows.push_back({op.grid.r[i], J[i], (sol.f.row(i).array() - sol.far_field).abs().maxCoeff()});
  F.metadata = meta;
  F.metadata["inflow"] = "v . nu";
  F.metadata["far_field"] = sol.far_field;
  F.metadata["remainder"] = sol.remainder;

  ojson r = meta;
  r["layer_scale"] = scale;
  r["nodes"] = op.grid.size();
  r["kappa"] = op.kappa;
  r["rcond"] = op.rcond;
  r["invariants"] = {{"sum_W", sumW},
                     {"max_sum_G", maxG},
                     {"R1_error", r1},
                     {"flux_spread", *jhi - *jlo},
                     {"theta_residual", theta.residual},
                     {"theta_adjoint_residual", theta.adjoint_residual},
                     {"sigma_min", theta.sigma_min},
                     {"sigma_next", theta.sigma_next},
                     {"a0_error", std::abs(a0.a0 - 1.0)},
                     {"necessary_condition", a0.necessary}};
  r["far_field"] = sol.far_field;
  r["remainder"] = sol.remainder;
  r["H"] = {{"C_alpha", k.C_alpha},
            {"chi", k.chi},
            {"grad_rho_wall", {grad.x, grad.y}},
            {"advective", H.advective},
            {"fractional", H.fractional},
            {"advective_error", H.advective_error},
            {"fractional_error", H.fractional_error}};
  emit_dataset(W, out_dir(c));
  emit_dataset(G, out_dir(c));
  emit_dataset(F, out_dir(c));
  emit_report("milne_report", r, out_dir(c));
  return {{"milne_W.csv", "milne_W.json", "milne_G.csv", "milne_G.json", "milne_flux.csv",
           "milne_flux.json", "milne_report.json"},
          r};
}

// ------------------------------------------------------------------ match

// Mass of a cell-wise constant profile within `width` of either wall.
double strip_mass(const std::vector<double>& u, const macro::Grid1D& g, double width) {
  double m = 0.0;
  for (int i = 0; i < g.cells; ++i) {
    const double a = g.face(i), b = g.face(i + 1);
    const double left = std::max(0.0, std::min(b, width) - a);
    const double right = std::max(0.0, b - std::max(a, g.length - width));
    m += u[i] * std::min(b - a, left + right);
  }
  return m;
}

RunResult run_match(const RunConfig& c) {
  require(c.geometry.kind == "interval", ErrorCategory::Configuration,
          "match pairs the interval Monte Carlo with the 1D macroscopic solver");
  require(c.length() == c.geometry.extent, ErrorCategory::Configuration,
          "match needs L equal to geometry.extent");
  const int bins = c.bins > 0 ? c.bins : c.N;
  require(bins == c.N, ErrorCategory::Configuration, "match needs bins equal to N");

  const macro::MacroSolver solver(macro_problem(c));
  const auto& g = solver.problem().grid;
  const auto u0 = initial_cells(c, g);
  const auto times = c.snapshot_times();
  const auto snaps = solver.solve(u0, c.horizon, times, c.dt);

  Dataset ds;
  ds.name = "match";
  ds.columns = {"epsilon", "time", "l1", "strip_width", "mc_strip_mass", "macro_strip_mass"};
  ojson per = ojson::array();
  std::vector<double> final_l1, residuals;
  // One strip for every epsilon: the layer width of the finest run.
  const double eps_min = *std::min_element(c.epsilons.begin(), c.epsilons.end());
  const double width = c.strip_width.value_or(
      std::pow(eps_min, 0.5 * kinetic::scaling_exponents(c.alpha).varrho) * c.c0 * c.tau0 /
      (c.alpha - 1.0));
  for (double eps : c.epsilons) {
    auto ec = ensemble(c, eps);
    ec.strip_width = width;
    const auto res = mc::simulate_ensemble(ec);

    std::vector<double> t{0.0}, mc_strip{strip_mass(u0, g, width)}, pde_strip{mc_strip[0]};
    double l1 = 0.0;
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const auto d = res.snapshots[s].density();
      l1 = macro::l1_distance(d, snaps[s].values, g.h);
      const double ms = static_cast<double>(res.strip_counts[s]) / static_cast<double>(c.particles);
      const double ps = strip_mass(snaps[s].values, g, width);
      ds.rows.push_back({eps, snaps[s].time, l1, width, ms, ps});
      t.push_back(snaps[s].time);
      mc_strip.push_back(ms);
      pde_strip.push_back(ps);
    }
    const double resid = t.size() >= 3 ? layer::matching_residual(t, pde_strip, mc_strip)
                                       : std::numeric_limits<double>::quiet_NaN();
    final_l1.push_back(l1);
    residuals.push_back(resid);
    per.push_back({{"epsilon", eps}, {"strip_width", width}, {"final_l1", l1},
                   {"matching_residual", resid}, {"tumbles", res.tumbles}});
  }
  bool l1_ok = true, res_ok = true;
  for (std::size_t i = 1; i < final_l1.size(); ++i) {
    l1_ok = l1_ok && final_l1[i] <= final_l1[i - 1];
    res_ok = res_ok && residuals[i] < residuals[i - 1];
  }
  ojson r = metadata(c);
  r["C_alpha"] = solver.problem().C_alpha;
  r["chi"] = solver.problem().chi;
  r["runs"] = per;
  r["l1_non_increasing"] = l1_ok;
  r["residual_decreasing"] = res_ok;
  ds.metadata = metadata(c);
  emit_dataset(ds, out_dir(c));
  emit_report("match_report", r, out_dir(c));
  return {{"match.csv", "match.json", "match_report.json"}, r};
}

// ----------------------------------------------------------------- curved

layer::VectorField curved_field(const std::string& name, double R) {
  if (name == "radial") {
    return {[](Vec2 x) { return -1.0 / norm(x) * x; },
            [](Vec2 x) {
              const double s = norm(x);
              const Vec2 e = (1.0 / s) * x;
              return std::array<double, 4>{-(1 - e.x * e.x) / s, e.x * e.y / s,
                                           e.x * e.y / s, -(1 - e.y * e.y) / s};
            }};
  }
  if (name == "layer") {
    // w = exp(-d) nu with d = R - |x|.
    return {[R](Vec2 x) {
              const double s = norm(x);
              return -std::exp(s - R) / s * x;
            },
            [R](Vec2 x) {
              const double s = norm(x);
              const Vec2 e = (1.0 / s) * x;
              const double g = std::exp(s - R);
              auto J = [&](double ei, double ej, double d) {
                return -(g * ei * ej + g * (d - ei * ej) / s);
              };
              return std::array<double, 4>{J(e.x, e.x, 1), J(e.x, e.y, 0), J(e.y, e.x, 0),
                                           J(e.y, e.y, 1)};
            }};
  }
  return {[](Vec2 x) {
            return Vec2{std::sin(1.3 * x.x + 0.7 * x.y) + 0.2, std::cos(0.9 * x.x - 1.1 * x.y)};
          },
          [](Vec2 x) {
            const double a = std::cos(1.3 * x.x + 0.7 * x.y);
            const double b = -std::sin(0.9 * x.x - 1.1 * x.y);
            return std::array<double, 4>{1.3 * a, 0.7 * a, 0.9 * b, -1.1 * b};
          }};
}

constexpr double kRoundoffResidual = 1e-12;

RunResult run_curved(const RunConfig& c) {
  const double R = c.geometry.extent;
  const double delta = c.strip_width.value_or(0.25 * R);
  const auto w = curved_field(c.field, R);
  Dataset ds;
  ds.name = "curved";
  ds.columns = {"panels", "order", "strip_integral", "inner_edge", "wall", "residual"};
  double best = 0.0;
  std::vector<double> coarse;
  for (int order : {c.quadrature_order, 1}) {
    for (int p : c.panels) {
      const auto r = layer::curved_conservation_check(w, R, delta, p, order);
      ds.rows.push_back({double(p), double(order), r.strip_integral, r.inner_edge, r.wall,
                         r.residual});
      if (order == c.quadrature_order && p == c.panels.back()) best = r.residual;
      if (order == 1) coarse.push_back(r.residual);
    }
    if (c.quadrature_order == 1) break;
  }
  // Observed order from the last two midpoint-rule levels; fields the rule
  // integrates exactly leave only roundoff and get no slope.
  double slope = std::numeric_limits<double>::quiet_NaN();
  const std::size_t m = coarse.size();
  if (m >= 2 && coarse[m - 1] > kRoundoffResidual) {
    const double ratio = double(c.panels[m - 1]) / double(c.panels[m - 2]);
    slope = std::log(coarse[m - 2] / coarse[m - 1]) / std::log(ratio);
  }
  ojson r = metadata(c);
  r["R"] = R;
  r["strip_width"] = delta;
  r["field"] = c.field;
  r["residual"] = best;
  r["midpoint_slope"] = std::isfinite(slope) ? ojson(slope) : ojson(nullptr);
  ds.metadata = metadata(c);
  emit_dataset(ds, out_dir(c));
  emit_report("curved_report", r, out_dir(c));
  return {{"curved.csv", "curved.json", "curved_report.json"}, r};
}

} // namespace

RunResult run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  if (cfg.subcommand == "spectra") r = run_spectra(cfg);
  else if (cfg.subcommand == "mc") r = run_mc(cfg);
  else if (cfg.subcommand == "macro") r = run_macro(cfg);
  else if (cfg.subcommand == "milne") r = run_milne(cfg);
  else if (cfg.subcommand == "match") r = run_match(cfg);
  else if (cfg.subcommand == "curved") r = run_curved(cfg);
  else
    fail(ErrorCategory::Configuration,
         "unknown subcommand '" + cfg.subcommand +
             "' (expected spectra, mc, macro, milne, match or curved)");
  if (cfg.timing) {
    // Kept out of the datasets so reruns stay byte-identical.
    ojson t;
    t["subcommand"] = cfg.subcommand;
    t["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report("timing", t, cfg.output_dir);
    r.files.push_back("timing.json");
  }
  return r;
}

} // namespace frackix::io
