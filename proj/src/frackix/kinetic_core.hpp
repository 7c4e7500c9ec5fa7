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

// Primitives of the run-and-tumble model: turning kernels, quadrature on the
// unit sphere (circle or the two-point set {-1, +1}), the first nontrivial
// eigenvalue of the turning operator, run-time sampling, and the constants of
// the macroscopic fractional chemotaxis equation.

#include "frackix/rng.hpp"
#include "frackix/vec2.hpp"

#include <functional>
#include <string>
#include <vector>

namespace frackix::kinetic {

enum class KernelType { Uniform, Cosine, VonMises, Custom };

/// Reorientation density l(|v - eta|), written as a function of the angle
/// theta in [0, pi] between the old and the new direction. Dimension 1 means
/// the direction set {-1, +1}, so only theta = 0 and theta = pi matter.
class TurnKernel {
public:
  static TurnKernel uniform(int n);
  /// (1 + cos theta) / (2 pi) on the circle; on {-1, +1} the same profile
  /// renormalized over the two points, which forbids reversals.
  static TurnKernel cosine(int n);
  /// exp(kappa cos theta), normalized analytically.
  static TurnKernel von_mises(int n, double kappa);
  /// Arbitrary nonnegative profile, taken as is (no normalization).
  static TurnKernel custom(int n, std::function<double(double)> profile,
                           std::string name = "custom");

  int dimension() const { return n_; }
  KernelType type() const { return type_; }
  double kappa() const { return kappa_; }
  const std::string& name() const { return name_; }

  /// Profile value at angular separation theta (any real; folded to [0, pi]).
  double operator()(double theta) const;

private:
  TurnKernel(int n, KernelType type, double kappa, std::string name,
             std::function<double(double)> profile);

  int n_;
  KernelType type_;
  double kappa_;
  std::string name_;
  std::function<double(double)> profile_;
};

/// Nodes on the unit sphere of R^n with positive weights summing to |S|.
struct SphereQuadrature {
  int dimension = 2;
  std::vector<Vec2> nodes;
  std::vector<double> weights;

  /// M equally spaced angles 2 pi (k + offset) / M, weights 2 pi / M. The
  /// default half-cell offset keeps every node off the coordinate axes, so a
  /// mirror-symmetric, grazing-free set results for even M.
  static SphereQuadrature circle(int count, double offset = 0.5);
  /// {-1, +1} with unit weights.
  static SphereQuadrature two_point();
  /// Dispatch on dimension: circle(count) for n = 2, two_point() for n = 1.
  static SphereQuadrature make(int n, int count = 64);

  std::size_t size() const { return nodes.size(); }
};

/// Angle between two unit vectors, in [0, pi].
double separation_angle(Vec2 a, Vec2 b);

double kernel_normalization(const TurnKernel& kernel,
                            const SphereQuadrature& quad);

/// nu_1 = \int_S l(|u - e_1|) u_1 du. Throws Validation if the kernel is not
/// normalized on `quad` (within 1e-8).
double eigenvalue_nu1(const TurnKernel& kernel, const SphereQuadrature& quad);

/// Quadrature resolution used for eigenvalues and constants.
inline constexpr int kEigenQuadratureNodes = 4096;

/// Convenience: nu_1 on the default high-resolution quadrature.
double eigenvalue_nu1(const TurnKernel& kernel);

/// Surface area of the unit sphere in R^n (2 for n = 1).
double sphere_area(int n);

/// Gamma(1 - alpha) via the reflection formula pi / (sin(pi alpha) Gamma(alpha)).
double gamma_reflection(double alpha);

struct ScalingExponents {
  double mu;     // run-time scaling exponent
  double varrho; // boundary-layer thickness exponent
};

/// mu = (2 - alpha) / (2 (alpha - 1)), varrho = 1 / (alpha - 1). Only
/// gamma = 1/2 is supported. varrho - 2 mu == 1 holds exactly in floating
/// point because mu is derived from varrho.
ScalingExponents scaling_exponents(double alpha, double gamma = 0.5);

/// Scalar model parameters (dimensionless).
struct ModelParams {
  double alpha = 1.5;
  double tau0 = 1.0;
  double tau1 = 0.0;
  double c0 = 1.0;
  double gamma = 0.5;
  double epsilon = 0.1;
  double mu = 0.5;
  double varrho = 2.0;

  /// Validates ranges and fills the derived exponents.
  static ModelParams make(double alpha, double tau0, double tau1, double c0,
                          double epsilon = 0.1);
};

struct MacroConstants {
  double C_alpha; // fractional diffusivity
  double chi;     // chemotactic sensitivity
};

MacroConstants macro_constants(const ModelParams& params, double nu1, int n);

/// Inverse CDF of the Lomax law with survival (b / (b + t))^alpha.
double lomax_quantile(double u, double alpha, double b);

/// Run time with hazard alpha / (b + t).
double sample_run_time(RandomStream& rng, double alpha, double b);

/// New direction eta drawn with density l(|v_old - eta|).
Vec2 sample_direction(RandomStream& rng, const TurnKernel& kernel, Vec2 v_old);

/// v - 2 (normal . v) normal. Both arguments must be unit vectors.
Vec2 specular_reflect(Vec2 v, Vec2 normal);

/// Static, analytic chemoattractant field.
struct ChemicalField {
  std::string name;
  std::function<double(Vec2)> rho;
  std::function<Vec2(Vec2)> grad_rho;

  static ChemicalField constant(double value);
  static ChemicalField linear(double offset, Vec2 gradient);
  /// amplitude * exp(-|x - center|^2 / (2 width^2))
  static ChemicalField gaussian(double amplitude, Vec2 center, double width);
  /// amplitude * cos(pi x / length), varying along x only.
  static ChemicalField cosine(double amplitude, double length);
};

} // namespace frackix::kinetic
