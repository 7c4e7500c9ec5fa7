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

// Grünwald-Letnikov discretizations of the fractional gradient of order
// alpha - 1 and of the divergence-form operator d/dx (d/dx)^(alpha-1) on a
// uniform cell-centered grid of N cells over [0, N h].
//
// Gradients live on the N + 1 cell faces (row f is face x = f h). The left
// derivative at face f is h^-beta sum_k g_k u_{f-k}, the right one is
// -h^-beta sum_k g_k u_{f-1+k}; both reduce to (u_f - u_{f-1}) / h at
// beta = 1. The symmetric gradient averages them, which makes the
// divergence form equal to -c(alpha) (-Laplacian)^(alpha/2) with
// c(alpha) = -cos(pi alpha / 2).

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace frackix::frac {

enum class Side { Left, Right, Symmetric };
enum class Boundary { Reflecting, Absorbing };
enum class OperatorKind { Gradient, DivGrad };

std::string to_string(Side s);
std::string to_string(Boundary b);
Side parse_side(const std::string& s);

/// g_0 = 1, g_k = g_{k-1} (k - 1 - beta) / k.
std::vector<double> grunwald_weights(double beta, int count);

/// Grünwald terms summed exactly before the power-law tail takes over.
int default_truncation(int n_cells);

/// c(alpha) with d/dx (symmetric d/dx^(alpha-1)) = -c(alpha) (-Laplacian)^(alpha/2).
double fractional_laplacian_constant(double alpha);

struct FracOperatorMatrix {
  OperatorKind kind = OperatorKind::Gradient;
  double alpha = 2.0;
  double order = 1.0; // alpha - 1 for gradients, alpha for DivGrad
  Side side = Side::Symmetric;
  Boundary bc = Boundary::Reflecting;
  double h = 1.0;
  Eigen::MatrixXd matrix; // (N + 1) x N for gradients, N x N for DivGrad

  Eigen::Index cells() const { return matrix.cols(); }
};

/// Face gradient of order alpha - 1. Reflecting: even extension of u across
/// both walls, summed over whole periods of the extension with a power-law
/// tail correction, wall rows zero. Absorbing: zero extension, wall rows kept.
FracOperatorMatrix build_frac_gradient_matrix(double alpha, int n_cells,
                                              double h,
                                              Side side = Side::Symmetric,
                                              Boundary bc = Boundary::Reflecting,
                                              int truncation = 0);

/// (F_{i+1} - F_i) / h applied to the face gradient. For the reflecting
/// variant entries are rounded to a common dyadic grid so that row and column
/// sums vanish exactly in floating point.
FracOperatorMatrix build_divgrad_matrix(double alpha, int n_cells, double h,
                                        Side side = Side::Symmetric,
                                        Boundary bc = Boundary::Reflecting,
                                        int truncation = 0);

/// Symmetric reflecting divergence form; alpha = 2 gives the Neumann
/// (1, -2, 1) / h^2 stencil exactly.
FracOperatorMatrix build_reflecting_divgrad_matrix(double alpha, int n_cells,
                                                   double h);

std::vector<double> apply_operator(const FracOperatorMatrix& op,
                                   std::span<const double> values);

/// Writes the matrix as headerless CSV with 17 significant digits.
void write_operator_csv(const FracOperatorMatrix& op, const std::string& path);

} // namespace frackix::frac
