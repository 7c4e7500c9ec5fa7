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

// Half-space boundary layer in discrete ordinates. With inner normal nu and
// mu = v . nu, the layer density f(r, v) solves
//
//   c0 mu df/dr + (1 - T) [ B f + kappa (c0 |mu|)^beta D_mu^beta f ] = g,
//
// B = (alpha - 1) / tau0, beta = alpha - 1,
// kappa = -tau0^(alpha - 2) (alpha - 1)^2 Gamma(1 - alpha) > 0.
// D_mu^beta is the Caputo derivative taken upstream: from r = 0 for mu > 0,
// from the far end for mu < 0 (sign(mu)|mu|^beta (d/dr)^beta composed with
// the upwinded side reproduces (c0 v . nu d/dr)^beta on both halves).
//
// Also: the albedo decomposition (W, G), the reflection operators R and P,
// the null vector Theta of (1 - PR), the boundary operator H, the layer flux
// w1, the mass matching residual and the curved-strip conservation check.

#include "frackix/kinetic_core.hpp"
#include "frackix/vec2.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace frackix::layer {

enum class OrdinateRule { Circle, HalfRangeGauss };

/// Ordinates on the unit circle with the inner normal nu = (1, 0).
struct OrdinateSet {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  std::vector<double> mu;       // v . nu
  std::vector<int> incoming;    // mu > 0, in node order
  std::vector<int> outgoing;    // mu < 0, in node order
  std::vector<int> mirror;      // index of v - 2 (v . nu) nu

  /// M equally spaced half-offset nodes; M must be a positive multiple of 4
  /// so that no node is grazing and the mirror map closes.
  static OrdinateSet circle(int count);
  /// Gauss-Legendre in angle on each half circle (count / 2 nodes each),
  /// mirror symmetric; resolves the grazing-angle behaviour better.
  static OrdinateSet half_range_gauss(int count);
  static OrdinateSet make(OrdinateRule rule, int count);
  int size() const { return static_cast<int>(nodes.size()); }
};

struct HalfSpaceGrid {
  std::vector<double> r;
  double scale = 1.0; // layer scale c0 tau0 / (alpha - 1)

  /// r_0 = 0, first spacing first * scale, growing by `ratio` up to
  /// cap * scale, ending exactly at r_max_scales * scale.
  static HalfSpaceGrid graded(double scale, double r_max_scales = 20.0,
                              double first = 0.02, double ratio = 1.15,
                              double cap = 0.5);
  int size() const { return static_cast<int>(r.size()); }
  double r_max() const { return r.back(); }
};

struct LayerParams {
  double alpha = 1.5;
  double tau0 = 1.0;
  double c0 = 1.0;
  kinetic::TurnKernel kernel = kinetic::TurnKernel::uniform(2);
  /// Replaces kappa; required at alpha = 2 where Gamma(1 - alpha) has a pole.
  std::optional<double> fractional_coefficient;
};

/// kappa = -tau0^(alpha - 2) (alpha - 1)^2 Gamma(1 - alpha), 1 < alpha < 2.
double layer_fractional_coefficient(double alpha, double tau0);

/// Caputo weights on a nonuniform grid (piecewise-linear, L1 type): row i
/// holds the coefficients of f_j in D^beta f(r_i). Left: memory from r_0,
/// right: from r_{N-1} with the sign of (-d/dr)^beta. beta = 1 gives the
/// backward (left) or forward (right) difference exactly.
Eigen::MatrixXd caputo_matrix(const std::vector<double>& r, double beta,
                              bool left);

struct TransportOperator {
  LayerParams params;
  OrdinateSet ordinates;
  HalfSpaceGrid grid;
  double B = 0.0;
  double kappa = 0.0;
  Eigen::MatrixXd turning; // T, rows sum to 1
  /// Cell equations ((N - 1) M rows) followed by the inflow rows at r = 0 and
  /// the far-field closure rows at r_max; unknown (i, k) sits at i M + k.
  Eigen::MatrixXd system;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double rcond = 0.0;

  int cells_rows() const { return (grid.size() - 1) * ordinates.size(); }
  int unknowns() const { return grid.size() * ordinates.size(); }
  int index(int node, int ordinate) const {
    return node * ordinates.size() + ordinate;
  }
};

TransportOperator build_transport_operator(const LayerParams& params,
                                           OrdinateSet ordinates,
                                           HalfSpaceGrid grid);

/// Residual of the cell equations for f (g = 0).
Eigen::VectorXd transport_residual(const TransportOperator& op,
                                   const Eigen::MatrixXd& f);

struct LayerSolution {
  Eigen::MatrixXd f; // nodes x ordinates
  double far_field = 0.0;
  double remainder = 0.0; // max |f(r_max, v) - far_field|
};

/// Solves with f(0, v) = inflow(v) for mu > 0 (ordered as `incoming`) and
/// outgoing values at r_max equal to the incoming-flux-weighted mean there.
/// `source` (nodes x ordinates) is optional.
LayerSolution solve_halfspace(const TransportOperator& op,
                              std::span<const double> inflow,
                              const Eigen::MatrixXd* source = nullptr);

/// int (v . nu) f(r, v) dv at every node.
std::vector<double> flux_moment(const OrdinateSet& ord, const LayerSolution& sol);

struct AlbedoData {
  std::vector<double> W;   // per incoming ordinate
  Eigen::MatrixXd G0;      // G(0, v', v): rows outgoing v, columns incoming v'
  Eigen::MatrixXd R;       // outgoing x incoming reflection matrix
  std::vector<double> far_remainder; // per unit-inflow solve
};

AlbedoData extract_albedo(const TransportOperator& op);

/// (R l)(v) = sum W l w + sum G(0, ., v) l w on the outgoing set.
std::vector<double> reflection_R(const AlbedoData& albedo,
                                 const OrdinateSet& ord,
                                 std::span<const double> inflow);

/// Adjoint with respect to the quadrature weights, outgoing -> incoming.
std::vector<double> reflection_R_adjoint(const AlbedoData& albedo,
                                         const OrdinateSet& ord,
                                         std::span<const double> outgoing);

enum class PromptKind { Specular, Diffuse };

/// P as an incoming x outgoing matrix.
Eigen::MatrixXd prompt_matrix(const OrdinateSet& ord, PromptKind kind);

/// P from a kernel p(v', v) (v' outgoing, v incoming); throws Validation if
/// sum_v p(v', v) w_v differs from 1 by more than `tol`.
Eigen::MatrixXd prompt_matrix(const OrdinateSet& ord,
                              const std::function<double(Vec2, Vec2)>& p,
                              double tol = 1e-10);

std::vector<double> prompt_P(const Eigen::MatrixXd& P,
                             std::span<const double> outgoing);

std::vector<double> prompt_P_adjoint(const Eigen::MatrixXd& P,
                                     const OrdinateSet& ord,
                                     std::span<const double> incoming);

struct ThetaResult {
  std::vector<double> theta; // incoming ordinates
  double residual = 0.0;     // ||(1 - PR) Theta||_inf
  double sigma_min = 0.0;
  double sigma_next = 0.0;
  double adjoint_residual = 0.0; // ||(1 - PR)^T (w mu)||_inf
};

/// Smallest right singular vector of 1 - PR, sign-fixed positive and scaled
/// to sum W Theta w = 1. Degeneracy if it is not isolated or not positive.
ThetaResult theta_nullspace(const AlbedoData& albedo, const Eigen::MatrixXd& P,
                            const OrdinateSet& ord);

struct A0Result {
  double a0 = 0.0;
  std::vector<double> ell0;
  double necessary = 0.0; // sum W ell0 w
};

/// a0 = u0 sum(W w) / sum(W Theta w), l0 = a0 Theta - u0.
A0Result recover_a0(double u0, std::span<const double> theta,
                    std::span<const double> W, const OrdinateSet& ord);

struct HCoefficients {
  double advective = 0.0;
  double fractional = 0.0;
  double advective_error = 0.0;
  double fractional_error = 0.0;
};

/// Coefficients of u0 in H u0 = int_{mu>0} mu (1 - P)[chi v.grad rho -
/// C_alpha v.grad^(alpha-1)] dv; the fractional one multiplies the normal
/// component nu . grad^(alpha-1) u0. Errors: change under doubled ordinates.
HCoefficients boundary_operator_H(
    double C_alpha, double chi, PromptKind kind, int ordinates,
    Vec2 grad_rho_wall, OrdinateRule rule = OrdinateRule::HalfRangeGauss);

struct FluxConstants {
  double C_tilde; // (alpha - 1) n (1 - nu1) / tau0
  double D_alpha; // pi tau0^2 (1 - alpha)^2 (n^2 nu1 - |S|) / (sin(pi alpha) Gamma(alpha) |S|)
};

FluxConstants flux_constants(double alpha, double tau0, double nu1, int n);

/// w1 = (-1/C) du/dr + (D/C) c0^beta D^beta u with the left Caputo derivative.
std::vector<double> boundary_flux_w1(const std::vector<double>& r,
                                     const std::vector<double>& u,
                                     double alpha, double tau0, double c0,
                                     double nu1, int n);

/// max over interior samples of |d/dt (interior - layer)| by centered
/// differences.
double matching_residual(std::span<const double> times,
                         std::span<const double> interior,
                         std::span<const double> layer);

struct VectorField {
  std::function<Vec2(Vec2)> value;
  /// Row-major Jacobian {dwx/dx, dwx/dy, dwy/dx, dwy/dy}.
  std::function<std::array<double, 4>(Vec2)> jacobian;
};

struct CurvedCheck {
  double strip_integral = 0.0; // int_strip [Delta d psi + d psi / dd]
  double inner_edge = 0.0;     // int_{d = delta} psi ds
  double wall = 0.0;           // int_{boundary} psi ds
  double residual = 0.0;       // |strip - (inner - wall)| / (2 pi R)
};

/// Divergence identity for psi = nu . w on the strip 0 < d < delta of the
/// disc of radius R (d = R - |x|, nu = -x/|x|, Delta d = -1/(R - d)), with
/// composite Gauss-Legendre quadrature of `order` points on `panels`
/// panels per direction.
CurvedCheck curved_conservation_check(const VectorField& w, double R,
                                      double delta, int panels = 8,
                                      int order = 6);

} // namespace frackix::layer
