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

// Conservative finite-volume solver for
//   du/dt = n c0 d/dx ( C_alpha d^(alpha-1)u/dx^(alpha-1) - chi u drho/dx )
// on [0, L] with zero flux through both walls.

#include "frackix/frac_ops.hpp"
#include "frackix/kinetic_core.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace frackix::macro {

struct Grid1D {
  int cells = 0;
  double length = 1.0;
  double h = 1.0;

  static Grid1D make(int cells, double length);
  double center(int i) const { return (i + 0.5) * h; }
  double face(int f) const { return f * h; }
};

enum class TimeScheme { Explicit, Imex };

struct MacroProblem {
  double alpha = 1.5;
  int dimension = 1; // the n in the n c0 prefactor
  double c0 = 1.0;
  double C_alpha = 1.0;
  double chi = 0.0;
  Grid1D grid;
  kinetic::ChemicalField rho = kinetic::ChemicalField::constant(0.0);
  frac::Side side = frac::Side::Symmetric;
  TimeScheme scheme = TimeScheme::Explicit;
};

struct Snapshot {
  double time = 0.0;
  std::vector<double> values;
};

class MacroSolver {
public:
  explicit MacroSolver(MacroProblem problem);

  const MacroProblem& problem() const { return problem_; }
  const frac::FracOperatorMatrix& gradient() const { return gradient_; }
  const frac::FracOperatorMatrix& divgrad() const { return divgrad_; }

  /// F = C_alpha (grad^(alpha-1) u) - chi u_upwind drho/dx at every face;
  /// the two wall faces carry exactly 0.
  std::vector<double> face_flux(const std::vector<double>& u) const;

  /// 0.5 min(2 / Gershgorin radius of n c0 C_alpha A, h / (n c0 |chi| max|rho'|)).
  double stable_dt() const;

  /// Largest dt accepted by `step` under the configured scheme.
  double max_dt() const;

  /// One step in place. Explicit: u += dt n c0 (F_{i+1} - F_i) / h.
  /// Imex: diffusion implicit, advection explicit. Throws Stability if
  /// dt > max_dt().
  void step(std::vector<double>& u, double dt) const;

  /// Integrates to each snapshot time exactly (last step shortened). dt <= 0
  /// picks max_dt() for Explicit and a tenfold larger step for Imex.
  std::vector<Snapshot> solve(const std::vector<double>& u0, double horizon,
                              const std::vector<double>& snapshot_times,
                              double dt = 0.0) const;

private:
  double advective_bound() const;

  MacroProblem problem_;
  frac::FracOperatorMatrix gradient_;
  frac::FracOperatorMatrix divgrad_;
  std::vector<double> face_drho_;
  double diffusion_bound_ = 0.0;
  mutable std::optional<double> lu_dt_;
  mutable Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// h * sum(u).
double total_mass(const std::vector<double>& u, double h);

/// Discrete L1 distance h * sum |a - b|.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b,
                   double h);

} // namespace frackix::macro
