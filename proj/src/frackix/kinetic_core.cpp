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

#include "frackix/kinetic_core.hpp"

#include "frackix/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace frackix::kinetic {

namespace {

constexpr double kPi = std::numbers::pi;

double fold_angle(double theta) {
  double t = std::fmod(std::fabs(theta), 2.0 * kPi);
  return t > kPi ? 2.0 * kPi - t : t;
}

void check_dimension(int n) {
  require(n == 1 || n == 2, ErrorCategory::Configuration,
          "turn kernels are supported for n = 1 or n = 2, got n = " +
              std::to_string(n));
}

// I_0(kappa) * exp(-kappa); the asymptotic series takes over before the
// unscaled Bessel function overflows.
double scaled_bessel_i0(double kappa) {
  if (kappa < 500.0)
    return std::cyl_bessel_i(0.0, kappa) * std::exp(-kappa);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= odd * odd / (8.0 * kappa * k);
    sum += term;
  }
  return sum / std::sqrt(2.0 * kPi * kappa);
}

} // namespace

TurnKernel::TurnKernel(int n, KernelType type, double kappa, std::string name,
                       std::function<double(double)> profile)
    : n_(n), type_(type), kappa_(kappa), name_(std::move(name)),
      profile_(std::move(profile)) {}

TurnKernel TurnKernel::uniform(int n) {
  check_dimension(n);
  const double value = 1.0 / sphere_area(n);
  return TurnKernel(n, KernelType::Uniform, 0.0, "uniform",
                    [value](double) { return value; });
}

TurnKernel TurnKernel::cosine(int n) {
  check_dimension(n);
  if (n == 1)
    return TurnKernel(1, KernelType::Cosine, 0.0, "cosine",
                      [](double t) { return 0.5 * (1.0 + std::cos(t)); });
  return TurnKernel(2, KernelType::Cosine, 0.0, "cosine", [](double t) {
    return (1.0 + std::cos(t)) / (2.0 * kPi);
  });
}

TurnKernel TurnKernel::von_mises(int n, double kappa) {
  check_dimension(n);
  require(kappa >= 0.0 && std::isfinite(kappa), ErrorCategory::Configuration,
          "von Mises concentration kappa must be finite and >= 0");
  if (n == 1) {
    const double z = 1.0 + std::exp(-2.0 * kappa);
    return TurnKernel(1, KernelType::VonMises, kappa, "vonmises",
                      [kappa, z](double t) {
                        return std::exp(kappa * (std::cos(t) - 1.0)) / z;
                      });
  }
  const double z = 2.0 * kPi * scaled_bessel_i0(kappa);
  return TurnKernel(2, KernelType::VonMises, kappa, "vonmises",
                    [kappa, z](double t) {
                      return std::exp(kappa * (std::cos(t) - 1.0)) / z;
                    });
}

TurnKernel TurnKernel::custom(int n, std::function<double(double)> profile,
                              std::string name) {
  check_dimension(n);
  return TurnKernel(n, KernelType::Custom, 0.0, std::move(name),
                    std::move(profile));
}

double TurnKernel::operator()(double theta) const {
  return profile_(fold_angle(theta));
}

SphereQuadrature SphereQuadrature::circle(int count, double offset) {
  require(count >= 2, ErrorCategory::Configuration,
          "circle quadrature needs at least 2 nodes");
  SphereQuadrature q;
  q.dimension = 2;
  q.nodes.reserve(count);
  q.weights.assign(count, 2.0 * kPi / count);
  for (int k = 0; k < count; ++k) {
    double a = 2.0 * kPi * (k + offset) / count;
    q.nodes.push_back({std::cos(a), std::sin(a)});
  }
  return q;
}

SphereQuadrature SphereQuadrature::two_point() {
  SphereQuadrature q;
  q.dimension = 1;
  q.nodes = {{1.0, 0.0}, {-1.0, 0.0}};
  q.weights = {1.0, 1.0};
  return q;
}

SphereQuadrature SphereQuadrature::make(int n, int count) {
  check_dimension(n);
  return n == 1 ? two_point() : circle(count);
}

double separation_angle(Vec2 a, Vec2 b) {
  // atan2 form stays accurate near 0 and pi, unlike acos(dot).
  double cross = a.x * b.y - a.y * b.x;
  return std::atan2(std::fabs(cross), dot(a, b));
}

double kernel_normalization(const TurnKernel& kernel,
                            const SphereQuadrature& quad) {
  require(kernel.dimension() == quad.dimension, ErrorCategory::Configuration,
          "kernel dimension " + std::to_string(kernel.dimension()) +
              " does not match quadrature dimension " +
              std::to_string(quad.dimension));
  const Vec2 e1{1.0, 0.0};
  double sum = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k)
    sum += quad.weights[k] * kernel(separation_angle(quad.nodes[k], e1));
  return sum;
}

double eigenvalue_nu1(const TurnKernel& kernel, const SphereQuadrature& quad) {
  const double norm = kernel_normalization(kernel, quad);
  require(std::fabs(norm - 1.0) <= 1e-8, ErrorCategory::Validation,
          "turn kernel '" + kernel.name() + "' is not normalized (integral = " +
              std::to_string(norm) + ")");
  const Vec2 e1{1.0, 0.0};
  double sum = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k)
    sum += quad.weights[k] * kernel(separation_angle(quad.nodes[k], e1)) *
           quad.nodes[k].x;
  return sum;
}

double eigenvalue_nu1(const TurnKernel& kernel) {
  return eigenvalue_nu1(kernel, SphereQuadrature::make(kernel.dimension(),
                                                       kEigenQuadratureNodes));
}

double sphere_area(int n) {
  require(n >= 1, ErrorCategory::Domain,
          "sphere dimension must be >= 1, got " + std::to_string(n));
  if (n == 1)
    return 2.0;
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double gamma_reflection(double alpha) {
  require(alpha > 1.0 && alpha < 2.0, ErrorCategory::Domain,
          "Gamma(1 - alpha) is evaluated for 1 < alpha < 2 only (pole at "
          "alpha = 2), got alpha = " + std::to_string(alpha));
  return kPi / (std::sin(kPi * alpha) * std::tgamma(alpha));
}

ScalingExponents scaling_exponents(double alpha, double gamma) {
  require(alpha > 1.0 && alpha <= 2.0, ErrorCategory::Domain,
          "scaling exponents need 1 < alpha <= 2, got alpha = " +
              std::to_string(alpha));
  require(gamma == 0.5, ErrorCategory::Domain,
          "only the speed scaling gamma = 1/2 is supported");
  const double varrho = 1.0 / (alpha - 1.0);
  // varrho >= 1, so varrho - 1 is exact and varrho - 2 mu == 1 bit for bit.
  const double mu = 0.5 * (varrho - 1.0);
  return {mu, varrho};
}

ModelParams ModelParams::make(double alpha, double tau0, double tau1,
                              double c0, double epsilon) {
  require(alpha > 1.0 && alpha <= 2.0, ErrorCategory::Validation,
          "alpha must lie in (1, 2]");
  require(tau0 > 0.0, ErrorCategory::Validation, "tau0 must be > 0");
  require(std::isfinite(tau1), ErrorCategory::Validation,
          "tau1 must be finite");
  require(c0 > 0.0, ErrorCategory::Validation, "c0 must be > 0");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorCategory::Validation,
          "epsilon must lie in (0, 1)");
  ModelParams p;
  p.alpha = alpha;
  p.tau0 = tau0;
  p.tau1 = tau1;
  p.c0 = c0;
  p.epsilon = epsilon;
  auto e = scaling_exponents(alpha, p.gamma);
  p.mu = e.mu;
  p.varrho = e.varrho;
  return p;
}

MacroConstants macro_constants(const ModelParams& params, double nu1, int n) {
  require(nu1 < 1.0, ErrorCategory::Validation,
          "nu1 must be < 1, got " + std::to_string(nu1));
  const double a = params.alpha;
  const double area = sphere_area(n);
  const double angular =
      (n * n * nu1 - area) / (n * area * (nu1 - 1.0));
  // -pi (tau0 c0)^(a-1) (a-1) / (sin(pi a) Gamma(a)) = -(tau0 c0)^(a-1) (a-1) Gamma(1-a)
  const double C = -std::pow(params.tau0 * params.c0, a - 1.0) * (a - 1.0) *
                   gamma_reflection(a) * angular;
  const double chi = params.tau1 * params.c0 / (n * params.tau0);
  return {C, chi};
}

double lomax_quantile(double u, double alpha, double b) {
  require(b > 0.0, ErrorCategory::Internal,
          "run-time scale must be positive, got " + std::to_string(b));
  return b * (std::pow(u, -1.0 / alpha) - 1.0);
}

double sample_run_time(RandomStream& rng, double alpha, double b) {
  return lomax_quantile(rng.uniform_open_closed(), alpha, b);
}

namespace {

constexpr int kMaxRejections = 1'000'000;

// Best & Fisher (1979) sampler for the von Mises angle.
double sample_von_mises_angle(RandomStream& rng, double kappa) {
  if (kappa < 1e-8)
    return kPi * (2.0 * rng.uniform() - 1.0);
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (int it = 0; it < kMaxRejections; ++it) {
    double z = std::cos(kPi * rng.uniform());
    double f = (1.0 + r * z) / (r + z);
    double c = kappa * (r - f);
    double u2 = rng.uniform_open_closed();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      double t = std::acos(std::clamp(f, -1.0, 1.0));
      return rng.uniform() < 0.5 ? -t : t;
    }
  }
  fail(ErrorCategory::Sampler, "von Mises sampler exceeded rejection cap");
}

double sample_by_rejection(RandomStream& rng, const TurnKernel& kernel) {
  double sup = 0.0;
  for (int i = 0; i <= 2048; ++i)
    sup = std::max(sup, kernel(kPi * i / 2048.0));
  sup *= 1.05;
  require(sup > 0.0, ErrorCategory::Sampler,
          "turn kernel '" + kernel.name() + "' vanishes identically");
  for (int it = 0; it < kMaxRejections; ++it) {
    double t = kPi * rng.uniform();
    if (rng.uniform() * sup <= kernel(t))
      return rng.uniform() < 0.5 ? -t : t;
  }
  fail(ErrorCategory::Sampler,
       "rejection sampler exceeded cap for kernel '" + kernel.name() + "'");
}

} // namespace

Vec2 sample_direction(RandomStream& rng, const TurnKernel& kernel,
                      Vec2 v_old) {
  if (kernel.dimension() == 1) {
    const double keep = kernel(0.0);
    const double flip = kernel(kPi);
    const double p_keep = keep / (keep + flip);
    const double s = rng.uniform() < p_keep ? 1.0 : -1.0;
    return {s * (v_old.x >= 0.0 ? 1.0 : -1.0), 0.0};
  }
  double turn = 0.0;
  switch (kernel.type()) {
  case KernelType::Uniform:
    turn = kPi * (2.0 * rng.uniform() - 1.0);
    break;
  case KernelType::VonMises:
    turn = sample_von_mises_angle(rng, kernel.kappa());
    break;
  case KernelType::Cosine:
  case KernelType::Custom:
    turn = sample_by_rejection(rng, kernel);
    break;
  }
  const double c = std::cos(turn);
  const double s = std::sin(turn);
  Vec2 eta{c * v_old.x - s * v_old.y, s * v_old.x + c * v_old.y};
  const double len = norm(eta);
  return eta * (1.0 / len);
}

Vec2 specular_reflect(Vec2 v, Vec2 normal) {
  require(std::fabs(norm(v) - 1.0) <= 1e-12 &&
              std::fabs(norm(normal) - 1.0) <= 1e-12,
          ErrorCategory::Validation,
          "specular reflection needs unit direction and unit normal");
  return v - normal * (2.0 * dot(normal, v));
}

ChemicalField ChemicalField::constant(double value) {
  return {"constant", [value](Vec2) { return value; },
          [](Vec2) { return Vec2{}; }};
}

ChemicalField ChemicalField::linear(double offset, Vec2 gradient) {
  return {"linear",
          [offset, gradient](Vec2 x) { return offset + dot(gradient, x); },
          [gradient](Vec2) { return gradient; }};
}

ChemicalField ChemicalField::gaussian(double amplitude, Vec2 center,
                                      double width) {
  require(width > 0.0, ErrorCategory::Validation,
          "gaussian chemoattractant width must be > 0");
  const double inv = 1.0 / (2.0 * width * width);
  return {"gaussian",
          [=](Vec2 x) {
            Vec2 d = x - center;
            return amplitude * std::exp(-dot(d, d) * inv);
          },
          [=](Vec2 x) {
            Vec2 d = x - center;
            double g = amplitude * std::exp(-dot(d, d) * inv);
            return d * (-2.0 * inv * g);
          }};
}

ChemicalField ChemicalField::cosine(double amplitude, double length) {
  require(length > 0.0, ErrorCategory::Validation,
          "cosine chemoattractant length must be > 0");
  const double k = kPi / length;
  return {"cosine",
          [=](Vec2 x) { return amplitude * std::cos(k * x.x); },
          [=](Vec2 x) { return Vec2{-amplitude * k * std::sin(k * x.x), 0.0}; }};
}

} // namespace frackix::kinetic
