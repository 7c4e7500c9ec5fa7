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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "frackix/boundary_layer.hpp"
#include "frackix/cli_io.hpp"
#include "frackix/error.hpp"
#include "frackix/frac_ops.hpp"
#include "frackix/kinetic_core.hpp"
#include "frackix/macro_solver.hpp"
#include "frackix/mc_simulator.hpp"
#include "frackix/rng.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifndef FRACKIX_SOURCE_DIR
#define FRACKIX_SOURCE_DIR "."
#endif

using namespace frackix;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Collects named checks; a criterion passes when every check does.
class Checks {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failed_.push_back(what);
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool ok() const { return failed_.empty(); }
  std::string summary() const {
    std::ostringstream s;
    const auto& items = failed_.empty() ? notes_ : failed_;
    for (std::size_t i = 0; i < items.size(); ++i) s << (i ? "; " : "") << items[i];
    return s.str();
  }

private:
  std::vector<std::string> failed_, notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("frackix_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

io::RunConfig shipped_config(const std::string& name) {
  auto c = io::load_config(std::string(FRACKIX_SOURCE_DIR) + "/tools/configs/" + name + ".json");
  c.subcommand = name;
  c.output_dir = scratch(name).string();
  return c;
}

// Independent nu1 oracle: adaptive quadrature of the kernel profile.
double nu1_oracle(const kinetic::TurnKernel& k) {
  using boost::math::quadrature::gauss_kronrod;
  if (k.dimension() == 1) return (k(0.0) - k(kPi)) / (k(0.0) + k(kPi));
  auto num = gauss_kronrod<double, 61>::integrate([&](double t) { return k(t) * std::cos(t); },
                                                  0.0, kPi, 15, 1e-14);
  auto den = gauss_kronrod<double, 61>::integrate([&](double t) { return k(t); }, 0.0, kPi, 15,
                                                  1e-14);
  return num / den;
}

void spectral_suite(Checks& c) {
  using kinetic::TurnKernel;
  const double u1 = kinetic::eigenvalue_nu1(TurnKernel::uniform(1));
  const double u2 = kinetic::eigenvalue_nu1(TurnKernel::uniform(2));
  c.expect(std::abs(u1) <= 1e-10 && std::abs(u2) <= 1e-10, "uniform nu1 = " + fmt(u2));
  const auto cos2 = TurnKernel::cosine(2);
  const double nc = kinetic::eigenvalue_nu1(cos2);
  const double oc = nu1_oracle(cos2);
  c.expect(std::abs(nc - 0.5) <= 1e-10 && std::abs(oc - 0.5) <= 1e-10,
           "cosine nu1 = " + fmt(nc) + ", oracle " + fmt(oc));
  std::vector<TurnKernel> shipped{TurnKernel::uniform(1), TurnKernel::uniform(2), cos2};
  for (double kappa : {0.0, 0.5, 2.0, 10.0}) {
    shipped.push_back(TurnKernel::von_mises(1, kappa));
    shipped.push_back(TurnKernel::von_mises(2, kappa));
  }
  double worst = -1.0, oracle_gap = 0.0;
  for (const auto& k : shipped) {
    const double v = kinetic::eigenvalue_nu1(k);
    worst = std::max(worst, v);
    oracle_gap = std::max(oracle_gap, std::abs(v - nu1_oracle(k)));
  }
  c.expect(worst < 1.0, "max nu1 over shipped kernels = " + fmt(worst));
  c.expect(oracle_gap <= 1e-10, "nu1 vs quadrature oracle gap " + fmt(oracle_gap));
  // The one-dimensional cosine profile never reverses (nu1 = 1); macro
  // constants must refuse it rather than divide by zero.
  bool rejected = false;
  try {
    kinetic::macro_constants(kinetic::ModelParams::make(1.5, 1.0, 0.0, 1.0),
                             kinetic::eigenvalue_nu1(TurnKernel::cosine(1)), 1);
  } catch (const Error&) {
    rejected = true;
  }
  c.expect(rejected, "degenerate 1-D cosine kernel accepted");
  c.note("cosine nu1 " + fmt(nc) + ", min 1 - nu1 " + fmt(1.0 - worst) + ", oracle gap " +
         fmt(oracle_gap));
}

void gamma_suite(Checks& c) {
  double worst = 0.0, vs_tgamma = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double a = 1.0 + 0.1 * i;
    const double g = kinetic::gamma_reflection(a);
    worst = std::max(worst, std::abs(g * std::sin(kPi * a) * std::tgamma(a) - kPi) / kPi);
    vs_tgamma = std::max(vs_tgamma, std::abs(g / std::tgamma(1.0 - a) - 1.0));
  }
  c.expect(worst <= 1e-12, "reflection identity error " + fmt(worst));
  c.expect(vs_tgamma <= 1e-12, "Gamma(1 - alpha) vs tgamma " + fmt(vs_tgamma));
  c.note("identity error " + fmt(worst) + ", vs tgamma " + fmt(vs_tgamma));
}

void scaling_suite(Checks& c) {
  RandomStream rng(2024);
  int exact = 0;
  double mu_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = 1.0 + rng.uniform_open_closed() * (1.0 - 1e-12);
    const auto e = kinetic::scaling_exponents(a);
    exact += (e.varrho - 2.0 * e.mu == 1.0);
    mu_err = std::max(mu_err, std::abs(e.mu - (2.0 - a) / (2.0 * (a - 1.0))) /
                                  std::max(1.0, std::abs(e.mu)));
    c.expect(e.varrho == 1.0 / (a - 1.0), "varrho differs at alpha " + fmt(a));
  }
  c.expect(exact == 1000, "varrho - 2 mu = 1 held for " + std::to_string(exact) + "/1000");
  c.expect(mu_err <= 1e-12, "mu formula error " + fmt(mu_err));
  const auto two = kinetic::scaling_exponents(2.0);
  c.expect(two.mu == 0.0 && two.varrho == 1.0, "alpha = 2 gives (" + fmt(two.mu) + ", " +
                                                   fmt(two.varrho) + ")");
  c.note(std::to_string(exact) + "/1000 bit-exact, mu error " + fmt(mu_err));
}

void operator_suite(Checks& c) {
  const int n = 1024;
  const double h = 1.0 / n;
  auto two = frac::build_reflecting_divgrad_matrix(2.0, n, h);
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) { ref(i, i - 1) += 1.0 / (h * h); ref(i, i) -= 1.0 / (h * h); }
    if (i + 1 < n) { ref(i, i + 1) += 1.0 / (h * h); ref(i, i) -= 1.0 / (h * h); }
  }
  const double stencil = (two.matrix - ref).cwiseAbs().maxCoeff();
  c.expect(stencil <= 1e-14, "Neumann stencil gap " + fmt(stencil));
  double cols = 0.0, rows = 0.0, gersh = -1e300, eig = -1e300;
  for (double alpha : {1.1, 1.3, 1.5, 1.7, 1.9, 2.0}) {
    auto op = frac::build_reflecting_divgrad_matrix(alpha, n, h);
    const Eigen::MatrixXd& A = op.matrix;
    const double scale = A.cwiseAbs().maxCoeff();
    cols = std::max(cols, A.colwise().sum().cwiseAbs().maxCoeff() / scale);
    rows = std::max(rows, (A * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() / scale);
    // Column Gershgorin discs bound every eigenvalue's real part.
    for (int j = 0; j < n; ++j)
      gersh = std::max(gersh, (A(j, j) + (A.col(j).cwiseAbs().sum() - std::abs(A(j, j)))) / scale);
    auto small = frac::build_reflecting_divgrad_matrix(alpha, 128, 1.0 / 128);
    Eigen::EigenSolver<Eigen::MatrixXd> es(small.matrix, false);
    eig = std::max(eig, es.eigenvalues().real().maxCoeff() / small.matrix.cwiseAbs().maxCoeff());
  }
  c.expect(cols <= 1e-13, "column sums " + fmt(cols));
  c.expect(rows <= 1e-12, "constants " + fmt(rows));
  c.expect(gersh <= 1e-10, "Gershgorin real-part bound " + fmt(gersh));
  c.expect(eig <= 1e-10, "eigenvalue real part at N = 128: " + fmt(eig));
  c.note("stencil " + fmt(stencil) + ", column sums " + fmt(cols) + ", constants " + fmt(rows) +
         ", spectral bound " + fmt(gersh) + " (relative)");
}

macro::MacroProblem macro_problem(double alpha, int n, double chi) {
  macro::MacroProblem p;
  p.alpha = alpha;
  p.dimension = 1;
  p.C_alpha = 1.0;
  p.chi = chi;
  p.grid = macro::Grid1D::make(n, 1.0);
  p.rho = kinetic::ChemicalField::cosine(0.5, 1.0);
  return p;
}

std::vector<double> bump(const macro::Grid1D& g) {
  std::vector<double> u(g.cells);
  for (int i = 0; i < g.cells; ++i)
    u[i] = std::exp(-40.0 * (g.center(i) - 0.3) * (g.center(i) - 0.3)) + 0.1;
  return u;
}

void macro_suite(Checks& c) {
  const int n = 512;
  {
    macro::MacroSolver s(macro_problem(1.5, n, 0.2));
    auto u = bump(s.problem().grid);
    const double h = s.problem().grid.h, m0 = macro::total_mass(u, h);
    const double dt = s.stable_dt();
    for (int k = 0; k < 10000; ++k) s.step(u, dt);
    const double drift = std::abs(macro::total_mass(u, h) - m0) / m0;
    c.expect(drift <= 1e-12, "mass drift " + fmt(drift));
    c.note("mass drift " + fmt(drift));
  }
  {
    auto p = macro_problem(2.0, n, 0.2);
    p.scheme = macro::TimeScheme::Imex;
    macro::MacroSolver s(p);
    const auto& g = p.grid;
    auto end = s.solve(std::vector<double>(n, 1.0), 3.0, {3.0}, 2e-3)[0].values;
    std::vector<double> oracle(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      oracle[i] = std::exp(p.chi * p.rho.rho({g.center(i), 0.0}) / p.C_alpha);
      z += g.h * oracle[i];
    }
    for (double& v : oracle) v /= z;
    const double l1 = macro::l1_distance(end, oracle, g.h);
    c.expect(l1 <= 1e-3, "steady state L1 " + fmt(l1));
    c.note("steady state L1 " + fmt(l1));
  }
  {
    const double T = 0.02;
    auto run = [&](double alpha) {
      macro::MacroSolver s(macro_problem(alpha, n, 0.3));
      return s.solve(bump(s.problem().grid), T, {T})[0].values;
    };
    const auto classical = run(2.0);
    std::vector<double> gaps;
    for (double a : {1.9, 1.99, 1.999}) gaps.push_back(macro::l1_distance(run(a), classical, 1.0 / n));
    c.expect(gaps[0] > gaps[1] && gaps[1] > gaps[2],
             "gaps " + fmt(gaps[0]) + " " + fmt(gaps[1]) + " " + fmt(gaps[2]));
    c.note("alpha -> 2 gaps " + fmt(gaps[0]) + " > " + fmt(gaps[1]) + " > " + fmt(gaps[2]));
  }
}

void mc_suite(Checks& c) {
  mc::EnsembleConfig e;
  e.particles = 100000;
  e.horizon = 5.0;
  e.snapshot_times = {0.5, 2.0, 5.0};
  e.params = kinetic::ModelParams::make(1.5, 1.0, 0.0, 1.0, 0.1);
  e.kernel = kinetic::TurnKernel::uniform(1);
  e.geometry = mc::DomainGeometry::interval(1.0);
  e.bins = 20;
  e.seed = 42;
  const auto r = mc::simulate_ensemble(e);
  bool conserved = true;
  for (const auto& h : r.snapshots) conserved = conserved && h.total() == e.particles;
  const auto& last = r.snapshots.back();
  const double n = static_cast<double>(e.particles), p = 1.0 / last.bins();
  const double sigma = std::sqrt(n * p * (1.0 - p));
  double worst = 0.0;
  for (auto count : last.counts) worst = std::max(worst, std::abs(double(count) - n * p) / sigma);
  c.expect(worst <= 3.0, "equilibrium deviation " + fmt(worst) + " sigma");

  auto d = e;
  d.particles = 20000;
  d.horizon = 1.0;
  d.snapshot_times = {0.5, 1.0};
  d.params = kinetic::ModelParams::make(1.5, 1.0, 0.5, 1.0, 0.1);
  d.kernel = kinetic::TurnKernel::von_mises(2, 1.0);
  d.geometry = mc::DomainGeometry::disc(1.0);
  d.field = kinetic::ChemicalField::gaussian(1.0, {0.3, 0.2}, 0.3);
  d.bins = 10;
  for (const auto& h : mc::simulate_ensemble(d).snapshots)
    conserved = conserved && h.total() == d.particles;
  c.expect(conserved, "particle count changed");

  RandomStream rng(99);
  std::vector<double> runs(1000000);
  for (double& t : runs) t = kinetic::sample_run_time(rng, 1.5, 1.0);
  const double hill = mc::hill_tail_index(runs, 10000);
  c.expect(std::abs(hill - 1.5) <= 0.1, "Hill estimate " + fmt(hill));
  c.note("counts conserved, Hill " + fmt(hill) + ", max bin deviation " + fmt(worst) +
         " sigma");
}

void matching_suite(Checks& c) {
  const auto cfg = shipped_config("match");
  const auto r = io::run(cfg).report;
  std::string l1s, res;
  for (const auto& run : r["runs"]) {
    l1s += (l1s.empty() ? "" : " ") + fmt(run["final_l1"].get<double>());
    res += (res.empty() ? "" : " ") + fmt(run["matching_residual"].get<double>());
  }
  c.expect(r["l1_non_increasing"].get<bool>(), "L1 not non-increasing: " + l1s);
  c.expect(r["residual_decreasing"].get<bool>(), "residual not decreasing: " + res);
  c.note("L1 " + l1s + "; residual " + res);
  fs::remove_all(cfg.output_dir);
}

layer::TransportOperator layer_op(int ordinates, double r_max) {
  layer::LayerParams p;
  p.alpha = 1.5;
  return layer::build_transport_operator(p, layer::OrdinateSet::half_range_gauss(ordinates),
                                         layer::HalfSpaceGrid::graded(2.0, r_max));
}

// Ordinate-independent summaries of the layer: W moments and H coefficients.
std::vector<double> layer_summary(const layer::TransportOperator& op) {
  const auto& o = op.ordinates;
  const auto a = layer::extract_albedo(op);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t b = 0; b < a.W.size(); ++b) {
    const int k = o.incoming[b];
    m1 += o.weights[k] * a.W[b] * o.mu[k];
    m2 += o.weights[k] * a.W[b] * o.mu[k] * o.mu[k];
  }
  return {m1, m2};
}

double relative_change(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(a[i]), 1e-300));
  return worst;
}

void halfspace_suite(Checks& c) {
  const int M = 32;
  const auto op = layer_op(M, 20.0);
  const auto& o = op.ordinates;
  const int h = static_cast<int>(o.incoming.size());
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(op.grid.size(), o.size());
  const double res1 = layer::transport_residual(op, ones).cwiseAbs().maxCoeff();
  c.expect(res1 <= 1e-10, "f = 1 residual " + fmt(res1));

  std::vector<double> l;
  for (int k : o.incoming) l.push_back(o.nodes[k].x + 0.3 * o.nodes[k].y * o.nodes[k].y);
  const auto J = layer::flux_moment(o, layer::solve_halfspace(op, l));
  const auto [lo, hi] = std::minmax_element(J.begin(), J.end());
  c.expect(*hi - *lo <= 1e-8, "flux spread " + fmt(*hi - *lo));

  const auto a = layer::extract_albedo(op);
  double sumW = -1.0, sumG = 0.0;
  for (int b = 0; b < h; ++b) sumW += o.weights[o.incoming[b]] * a.W[b];
  for (int q = 0; q < a.G0.rows(); ++q) {
    double s = 0.0;
    for (int b = 0; b < h; ++b) s += o.weights[o.incoming[b]] * a.G0(q, b);
    sumG = std::max(sumG, std::abs(s));
  }
  c.expect(std::abs(sumW) <= 1e-8 && sumG <= 1e-8, "sum W - 1 = " + fmt(sumW) + ", sum G " + fmt(sumG));

  double r1 = 0.0, balance = 0.0;
  for (double x : layer::reflection_R(a, o, std::vector<double>(h, 1.0))) r1 = std::max(r1, std::abs(x - 1.0));
  RandomStream rng(7);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> in(h);
    for (double& x : in) x = 2.0 * rng.uniform() - 0.5;
    const auto out = layer::reflection_R(a, o, in);
    double fi = 0.0, fo = 0.0;
    for (int b = 0; b < h; ++b) fi += o.weights[o.incoming[b]] * o.mu[o.incoming[b]] * in[b];
    for (int q = 0; q < h; ++q) fo += o.weights[o.outgoing[q]] * std::abs(o.mu[o.outgoing[q]]) * out[q];
    balance = std::max(balance, std::abs(fi - fo));
  }
  c.expect(r1 <= 1e-8 && balance <= 1e-8, "R(1) error " + fmt(r1) + ", balance " + fmt(balance));

  double pcons = 0.0, theta_res = 0.0, theta_norm = 0.0, a0_err = 0.0;
  bool positive = true;
  for (auto kind : {layer::PromptKind::Specular, layer::PromptKind::Diffuse}) {
    const auto P = layer::prompt_matrix(o, kind);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> f(h);
      for (double& x : f) x = rng.uniform();
      const auto g = layer::prompt_P(P, f);
      double fi = 0.0, fo = 0.0;
      for (int q = 0; q < h; ++q) fi += o.weights[o.incoming[q]] * o.mu[o.incoming[q]] * g[q];
      for (int q = 0; q < h; ++q) fo += o.weights[o.outgoing[q]] * std::abs(o.mu[o.outgoing[q]]) * f[q];
      pcons = std::max(pcons, std::abs(fi - fo));
    }
    const auto th = layer::theta_nullspace(a, P, o);
    theta_res = std::max(theta_res, th.residual);
    double s = -1.0;
    for (int b = 0; b < h; ++b) {
      positive = positive && th.theta[b] > 0.0;
      s += o.weights[o.incoming[b]] * a.W[b] * th.theta[b];
    }
    theta_norm = std::max(theta_norm, std::abs(s));
    for (double u0 : {0.0, 1.0, 3.7, -1.25})
      a0_err = std::max(a0_err, std::abs(layer::recover_a0(u0, th.theta, a.W, o).a0 - u0));
  }
  c.expect(pcons <= 1e-12, "P conservation " + fmt(pcons));
  c.expect(theta_res <= 1e-10 && positive && theta_norm <= 1e-10,
           "Theta residual " + fmt(theta_res) + ", normalization " + fmt(theta_norm));
  c.expect(a0_err <= 1e-10, "a0 recovery " + fmt(a0_err));

  const auto base = layer_summary(op);
  const double d_ord = relative_change(base, layer_summary(layer_op(2 * M, 20.0)));
  const double d_rmax = relative_change(base, layer_summary(layer_op(M, 40.0)));
  auto H = [](int m) {
    const auto k = layer::boundary_operator_H(1.0, 0.5, layer::PromptKind::Specular, m, {1.0, 0.3});
    return std::vector<double>{k.advective, k.fractional};
  };
  const double d_h = relative_change(H(M), H(2 * M));
  c.expect(d_ord <= 1e-4 && d_h <= 1e-4, "doubled ordinates change " + fmt(std::max(d_ord, d_h)));
  c.expect(d_rmax <= 1e-4, "doubled R_max changes the W moments by " + fmt(d_rmax) +
                               " (algebraic r^-(alpha-1) layer tail at alpha = 1.5)");
  c.note("invariants <= " + fmt(std::max({res1, *hi - *lo, sumG, r1, balance, theta_res})) +
         ", doubled ordinates " + fmt(std::max(d_ord, d_h)) + ", doubled R_max " + fmt(d_rmax));
}

void curved_suite(Checks& c) {
  double worst = 0.0, slope = 1e300;
  int sloped = 0;
  for (const char* field : {"wavy", "radial", "layer"}) {
    auto cfg = shipped_config("curved");
    cfg.field = field;
    const auto r = io::run(cfg).report;
    worst = std::max(worst, r["residual"].get<double>());
    // null when the midpoint rule is already exact for the field
    if (r["midpoint_slope"].is_number()) {
      slope = std::min(slope, r["midpoint_slope"].get<double>());
      ++sloped;
    }
    fs::remove_all(cfg.output_dir);
  }
  c.expect(worst <= 1e-8, "strip residual " + fmt(worst));
  c.expect(sloped >= 2 && slope >= 1.0, "refinement slope " + fmt(slope));
  c.note("residual " + fmt(worst) + ", min refinement slope " + fmt(slope) + " over " +
         std::to_string(sloped) + " fields");
}

void determinism_suite(Checks& c) {
  int compared = 0;
  for (const char* name : {"spectra", "mc", "macro", "milne", "match", "curved"}) {
    auto cfg = shipped_config(name);
    cfg.dump_operator = std::string(name) == "macro";
    const auto first = io::run(cfg);
    std::vector<std::string> bytes;
    for (const auto& f : first.files) bytes.push_back(slurp(fs::path(cfg.output_dir) / f));
    const auto second = io::run(cfg);
    c.expect(first.files == second.files, std::string(name) + ": file lists differ");
    for (std::size_t i = 0; i < first.files.size(); ++i, ++compared)
      c.expect(slurp(fs::path(cfg.output_dir) / first.files[i]) == bytes[i],
               std::string(name) + "/" + first.files[i] + " differs");
    fs::remove_all(cfg.output_dir);
  }
  c.note(std::to_string(compared) + " files byte-identical across reruns");
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<void(Checks&)> body;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"spectral suite", 1.0, spectral_suite},
      {"Gamma reflection identity", 1.0, gamma_suite},
      {"scaling identities", 1.0, scaling_suite},
      {"fractional operator suite (N = 1024)", 10.0, operator_suite},
      {"macro solver (N = 512)", 60.0, macro_suite},
      {"Monte Carlo", 120.0, mc_suite},
      {"micro-macro matching", 600.0, matching_suite},
      {"half-space suite (32 ordinates)", 120.0, halfspace_suite},
      {"curved-boundary identity", 10.0, curved_suite},
      {"determinism", 600.0, determinism_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& cr = criteria[i];
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks.expect(secs <= cr.budget_seconds,
                  "runtime " + fmt(secs) + " s over budget " + fmt(cr.budget_seconds) + " s");
    failed += !checks.ok();
    std::printf("%s %2zu %s [%.2f s]: %s\n", checks.ok() ? "PASS" : "FAIL", i + 1, cr.name, secs,
                checks.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
