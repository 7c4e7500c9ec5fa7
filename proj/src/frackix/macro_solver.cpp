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

#include "frackix/macro_solver.hpp"

#include "frackix/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frackix::macro {

Grid1D Grid1D::make(int cells, double length) {
  require(cells >= 4, ErrorCategory::Configuration,
          "grid needs at least 4 cells, got " + std::to_string(cells));
  require(length > 0.0 && std::isfinite(length), ErrorCategory::Configuration,
          "domain length must be positive");
  return {cells, length, length / cells};
}

MacroSolver::MacroSolver(MacroProblem problem) : problem_(std::move(problem)) {
  const auto& p = problem_;
  require(p.C_alpha >= 0.0 && std::isfinite(p.C_alpha),
          ErrorCategory::Validation, "C_alpha must be finite and >= 0");
  require(std::isfinite(p.chi), ErrorCategory::Validation, "chi must be finite");
  require(p.c0 > 0.0, ErrorCategory::Validation, "c0 must be > 0");
  require(p.dimension >= 1, ErrorCategory::Validation, "dimension must be >= 1");
  const int n = p.grid.cells;
  const double h = p.grid.h;
  gradient_ = frac::build_frac_gradient_matrix(p.alpha, n, h, p.side);
  divgrad_ = frac::build_divgrad_matrix(p.alpha, n, h, p.side);

  face_drho_.assign(n + 1, 0.0);
  for (int f = 1; f < n; ++f)
    face_drho_[f] = p.rho.grad_rho(Vec2{p.grid.face(f), 0.0}).x;

  const double scale = p.dimension * p.c0 * p.C_alpha;
  double radius = 0.0;
  for (int i = 0; i < n; ++i)
    radius = std::max(radius, divgrad_.matrix.row(i).cwiseAbs().sum());
  radius *= scale;
  diffusion_bound_ = radius > 0.0 ? 2.0 / radius
                                  : std::numeric_limits<double>::infinity();
}

double MacroSolver::advective_bound() const {
  double peak = 0.0;
  for (double d : face_drho_)
    peak = std::max(peak, std::fabs(d));
  const double speed = problem_.dimension * problem_.c0 *
                       std::fabs(problem_.chi) * peak;
  return speed > 0.0 ? problem_.grid.h / speed
                     : std::numeric_limits<double>::infinity();
}

double MacroSolver::stable_dt() const {
  return 0.5 * std::min(diffusion_bound_, advective_bound());
}

double MacroSolver::max_dt() const {
  if (problem_.scheme == TimeScheme::Explicit)
    return stable_dt();
  return 0.5 * advective_bound();
}

std::vector<double> MacroSolver::face_flux(const std::vector<double>& u) const {
  const int n = problem_.grid.cells;
  require(static_cast<int>(u.size()) == n, ErrorCategory::Argument,
          "field has " + std::to_string(u.size()) + " values, grid has " +
              std::to_string(n) + " cells");
  Eigen::Map<const Eigen::VectorXd> x(u.data(), n);
  Eigen::VectorXd grad = gradient_.matrix * x;
  std::vector<double> flux(n + 1, 0.0);
  for (int f = 1; f < n; ++f) {
    const double a = problem_.chi * face_drho_[f];
    const double upwind = a > 0.0 ? u[f - 1] : u[f];
    flux[f] = problem_.C_alpha * grad(f) - a * upwind;
  }
  return flux;
}

void MacroSolver::step(std::vector<double>& u, double dt) const {
  require(dt > 0.0, ErrorCategory::Argument, "time step must be > 0");
  const double limit = max_dt();
  require(dt <= limit * (1.0 + 1e-12), ErrorCategory::Stability,
          "time step " + std::to_string(dt) + " exceeds the stable limit " +
              std::to_string(limit));
  const int n = problem_.grid.cells;
  const double k = dt * problem_.dimension * problem_.c0 / problem_.grid.h;

  if (problem_.scheme == TimeScheme::Explicit) {
    const auto flux = face_flux(u);
    for (int i = 0; i < n; ++i)
      u[i] += k * (flux[i + 1] - flux[i]);
    return;
  }

  require(static_cast<int>(u.size()) == n, ErrorCategory::Argument,
          "field size does not match the grid");
  Eigen::VectorXd rhs(n);
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    double next = 0.0;
    if (i + 1 < n) {
      const double a = problem_.chi * face_drho_[i + 1];
      next = -a * (a > 0.0 ? u[i] : u[i + 1]);
    }
    rhs(i) = u[i] + k * (next - prev);
    prev = next;
  }
  if (!lu_dt_ || *lu_dt_ != dt) {
    const double s = dt * problem_.dimension * problem_.c0 * problem_.C_alpha;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - s * divgrad_.matrix;
    lu_.compute(m);
    lu_dt_ = dt;
  }
  Eigen::VectorXd next = lu_.solve(rhs);
  require(next.allFinite(), ErrorCategory::Numerical,
          "implicit diffusion solve produced non-finite values");
  std::copy(next.data(), next.data() + n, u.begin());
}

std::vector<Snapshot> MacroSolver::solve(const std::vector<double>& u0,
                                         double horizon,
                                         const std::vector<double>& times,
                                         double dt) const {
  require(static_cast<int>(u0.size()) == problem_.grid.cells,
          ErrorCategory::Argument, "initial field size does not match the grid");
  require(horizon >= 0.0, ErrorCategory::Configuration, "horizon must be >= 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0.0 && times[i] <= horizon, ErrorCategory::Configuration,
            "snapshot times must lie in [0, horizon]");
    require(i == 0 || times[i] > times[i - 1], ErrorCategory::Configuration,
            "snapshot times must be strictly ascending");
  }
  if (dt <= 0.0) {
    dt = max_dt();
    if (problem_.scheme == TimeScheme::Imex)
      dt = std::min(dt, 10.0 * stable_dt());
  }
  if (!std::isfinite(dt))
    dt = horizon > 0.0 ? horizon : 1.0;

  std::vector<Snapshot> out;
  out.reserve(times.size());
  std::vector<double> u = u0;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-14)));
      const double sub = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s)
        step(u, sub);
    }
    t = target;
    out.push_back({target, u});
  }
  return out;
}

double total_mass(const std::vector<double>& u, double h) {
  double s = 0.0;
  for (double v : u)
    s += v;
  return h * s;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b,
                   double h) {
  require(a.size() == b.size(), ErrorCategory::Argument,
          "L1 distance needs equal lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::fabs(a[i] - b[i]);
  return h * s;
}

} // namespace frackix::macro
