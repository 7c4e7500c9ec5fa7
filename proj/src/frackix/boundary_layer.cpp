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

#include "frackix/error.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace frackix::layer {

namespace {

constexpr double kPi = std::numbers::pi;

double incoming_flux_norm(const OrdinateSet& ord) {
  double s = 0.0;
  for (int k : ord.incoming) s += ord.weights[k] * ord.mu[k];
  return s;
}

void require_finite(const Eigen::MatrixXd& m, const std::string& what) {
  require(m.allFinite(), ErrorCategory::Numerical,
          what + " produced non-finite values");
}

} // namespace

OrdinateSet OrdinateSet::circle(int count) {
  require(count >= 4 && count % 4 == 0, ErrorCategory::Configuration,
          "ordinate count must be a positive multiple of 4 (got " +
              std::to_string(count) + "); other counts put a node on the "
              "grazing direction");
  auto quad = kinetic::SphereQuadrature::circle(count);
  OrdinateSet o;
  o.nodes = quad.nodes;
  o.weights = quad.weights;
  o.mu.resize(count);
  o.mirror.resize(count);
  for (int k = 0; k < count; ++k) {
    o.mu[k] = o.nodes[k].x;
    require(std::abs(o.mu[k]) > 1e-12, ErrorCategory::Configuration,
            "grazing ordinate in the set");
    (o.mu[k] > 0.0 ? o.incoming : o.outgoing).push_back(k);
    o.mirror[k] = ((count / 2 - 1 - k) % count + count) % count;
  }
  return o;
}

OrdinateSet OrdinateSet::half_range_gauss(int count) {
  require(count >= 4 && count % 4 == 0, ErrorCategory::Configuration,
          "ordinate count must be a positive multiple of 4 (got " +
              std::to_string(count) + ")");
  const int h = count / 2;
  std::vector<double> z, wz;
  for (double x : boost::math::legendre_p_zeros<double>(h)) {
    const double dp = boost::math::legendre_p_prime(h, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    z.push_back(x);
    wz.push_back(w);
    if (x != 0.0) {
      z.push_back(-x);
      wz.push_back(w);
    }
  }
  std::vector<int> order(h);
  for (int i = 0; i < h; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return z[a] < z[b]; });
  OrdinateSet o;
  // Incoming angles in (-pi/2, pi/2), outgoing their mirrors pi - theta.
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < h; ++i) {
      const double th = 0.5 * kPi * z[order[i]];
      const double a = side == 0 ? th : kPi - th;
      o.nodes.push_back({std::cos(a), std::sin(a)});
      o.weights.push_back(0.5 * kPi * wz[order[i]]);
    }
  }
  o.mu.resize(count);
  o.mirror.resize(count);
  for (int k = 0; k < count; ++k) {
    o.mu[k] = o.nodes[k].x;
    (o.mu[k] > 0.0 ? o.incoming : o.outgoing).push_back(k);
    o.mirror[k] = k < h ? k + h : k - h;
  }
  return o;
}

OrdinateSet OrdinateSet::make(OrdinateRule rule, int count) {
  return rule == OrdinateRule::Circle ? circle(count) : half_range_gauss(count);
}

HalfSpaceGrid HalfSpaceGrid::graded(double scale, double r_max_scales,
                                    double first, double ratio, double cap) {
  require(scale > 0.0 && std::isfinite(scale), ErrorCategory::Configuration,
          "layer scale must be positive");
  require(r_max_scales > 0.0 && first > 0.0 && cap >= first && ratio >= 1.0,
          ErrorCategory::Configuration, "invalid graded grid parameters");
  require(first <= 0.01 * r_max_scales, ErrorCategory::Configuration,
          "first spacing must not exceed 1% of r_max");
  HalfSpaceGrid g;
  g.scale = scale;
  const double end = r_max_scales * scale;
  double h = first * scale;
  g.r.push_back(0.0);
  while (g.r.back() < end) {
    double next = g.r.back() + h;
    // Avoid a sliver cell at the end.
    if (next > end - 0.5 * h) next = end;
    g.r.push_back(next);
    h = std::min(h * ratio, cap * scale);
  }
  return g;
}

double layer_fractional_coefficient(double alpha, double tau0) {
  require(alpha > 1.0 && alpha < 2.0, ErrorCategory::Domain,
          "layer fractional coefficient needs 1 < alpha < 2; at alpha = 2 "
          "Gamma(1 - alpha) has a pole, supply fractional_coefficient");
  require(tau0 > 0.0, ErrorCategory::Domain, "tau0 must be positive");
  return -std::pow(tau0, alpha - 2.0) * (alpha - 1.0) * (alpha - 1.0) *
         std::tgamma(1.0 - alpha);
}

Eigen::MatrixXd caputo_matrix(const std::vector<double>& r, double beta,
                              bool left) {
  const int n = static_cast<int>(r.size());
  require(n >= 2, ErrorCategory::Argument, "Caputo grid needs two nodes");
  require(beta > 0.0 && beta <= 1.0, ErrorCategory::Domain,
          "Caputo order must lie in (0, 1]");
  for (int i = 1; i < n; ++i)
    require(r[i] > r[i - 1], ErrorCategory::Argument,
            "grid must be strictly increasing");
  const double e = 1.0 - beta;
  const double g = std::tgamma(2.0 - beta);
  auto pw = [e](double x) { return x > 0.0 ? std::pow(x, e) : 0.0; };
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (left) {
      for (int j = 0; j < i; ++j) {
        double a = (pw(r[i] - r[j]) - (j + 1 == i ? 0.0 : pw(r[i] - r[j + 1]))) / g;
        double s = a / (r[j + 1] - r[j]);
        D(i, j + 1) += s;
        D(i, j) -= s;
      }
    } else {
      for (int j = i; j + 1 < n; ++j) {
        double a = (pw(r[j + 1] - r[i]) - (j == i ? 0.0 : pw(r[j] - r[i]))) / g;
        double s = -a / (r[j + 1] - r[j]);
        D(i, j + 1) += s;
        D(i, j) -= s;
      }
    }
  }
  return D;
}

TransportOperator build_transport_operator(const LayerParams& params,
                                           OrdinateSet ordinates,
                                           HalfSpaceGrid grid) {
  const double alpha = params.alpha;
  require(alpha > 1.0 && alpha <= 2.0, ErrorCategory::Domain,
          "layer operator needs 1 < alpha <= 2");
  require(params.tau0 > 0.0 && params.c0 > 0.0, ErrorCategory::Domain,
          "tau0 and c0 must be positive");
  require(params.kernel.dimension() == 2, ErrorCategory::Configuration,
          "the layer solver uses the circle of directions (n = 2)");
  const int M = ordinates.size();
  const int N = grid.size();
  require(M >= 4 && N >= 3, ErrorCategory::Configuration,
          "layer problem needs at least 4 ordinates and 3 nodes");
  for (int k = 0; k < M; ++k)
    require(std::abs(ordinates.mu[k]) > 1e-12, ErrorCategory::Configuration,
            "grazing ordinate (v . nu = 0)");
  require(ordinates.incoming.size() == ordinates.outgoing.size(),
          ErrorCategory::Configuration, "ordinates must be mirror symmetric");

  TransportOperator op;
  op.params = params;
  op.B = (alpha - 1.0) / params.tau0;
  op.kappa = params.fractional_coefficient
                 ? *params.fractional_coefficient
                 : layer_fractional_coefficient(alpha, params.tau0);
  require(std::isfinite(op.kappa) && op.kappa >= 0.0, ErrorCategory::Domain,
          "fractional coefficient must be finite and non-negative");

  op.turning.resize(M, M);
  for (int k = 0; k < M; ++k) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) {
      op.turning(k, j) =
          params.kernel(kinetic::separation_angle(ordinates.nodes[k],
                                                  ordinates.nodes[j])) *
          ordinates.weights[j];
      s += op.turning(k, j);
    }
    require(s > 0.0, ErrorCategory::Numerical, "turning kernel vanishes");
    op.turning.row(k) /= s;
  }

  const double beta = alpha - 1.0;
  const Eigen::MatrixXd DL = caputo_matrix(grid.r, beta, true);
  const Eigen::MatrixXd DR = caputo_matrix(grid.r, beta, false);
  std::vector<double> s(M);
  for (int j = 0; j < M; ++j)
    s[j] = op.kappa * std::pow(params.c0 * std::abs(ordinates.mu[j]), beta);

  op.ordinates = std::move(ordinates);
  op.grid = std::move(grid);
  const auto& ord = op.ordinates;
  const auto& r = op.grid.r;
  const int n = op.unknowns();
  op.system = Eigen::MatrixXd::Zero(n, n);
  auto& A = op.system;

  for (int i = 0; i + 1 < N; ++i) {
    const double dr = r[i + 1] - r[i];
    for (int k = 0; k < M; ++k) {
      const int row = op.index(i, k);
      const double adv = params.c0 * ord.mu[k] / dr;
      A(row, op.index(i + 1, k)) += adv;
      A(row, op.index(i, k)) -= adv;
      for (int m : {i, i + 1}) {
        for (int j = 0; j < M; ++j) {
          const double c = 0.5 * ((j == k ? 1.0 : 0.0) - op.turning(k, j));
          if (c == 0.0) continue;
          A(row, op.index(m, j)) += c * op.B;
          const Eigen::MatrixXd& D = ord.mu[j] > 0.0 ? DL : DR;
          for (int l = 0; l < N; ++l) {
            if (D(m, l) != 0.0) A(row, op.index(l, j)) += c * s[j] * D(m, l);
          }
        }
      }
    }
  }

  int row = op.cells_rows();
  for (int k : ord.incoming) A(row++, op.index(0, k)) = 1.0;
  const double norm = incoming_flux_norm(ord);
  for (int k : ord.outgoing) {
    A(row, op.index(N - 1, k)) += 1.0;
    for (int j : ord.incoming)
      A(row, op.index(N - 1, j)) -= ord.weights[j] * ord.mu[j] / norm;
    ++row;
  }

  require_finite(A, "layer operator assembly");
  op.lu.compute(A);
  op.rcond = op.lu.rcond();
  require(std::isfinite(op.rcond) && op.rcond > 1e-14, ErrorCategory::Numerical,
          "layer system is singular (reciprocal condition estimate " +
              std::to_string(op.rcond) + ")");
  return op;
}

Eigen::VectorXd transport_residual(const TransportOperator& op,
                                   const Eigen::MatrixXd& f) {
  const int M = op.ordinates.size();
  require(f.rows() == op.grid.size() && f.cols() == M, ErrorCategory::Argument,
          "layer field has the wrong shape");
  Eigen::VectorXd x(op.unknowns());
  for (int i = 0; i < f.rows(); ++i)
    for (int k = 0; k < M; ++k) x(op.index(i, k)) = f(i, k);
  return op.system.topRows(op.cells_rows()) * x;
}

LayerSolution solve_halfspace(const TransportOperator& op,
                              std::span<const double> inflow,
                              const Eigen::MatrixXd* source) {
  const auto& ord = op.ordinates;
  const int M = ord.size();
  const int N = op.grid.size();
  require(inflow.size() == ord.incoming.size(), ErrorCategory::Argument,
          "inflow must have one value per incoming ordinate");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.unknowns());
  if (source) {
    require(source->rows() == N && source->cols() == M,
            ErrorCategory::Argument, "source has the wrong shape");
    for (int i = 0; i + 1 < N; ++i)
      for (int k = 0; k < M; ++k)
        rhs(op.index(i, k)) = 0.5 * ((*source)(i, k) + (*source)(i + 1, k));
  }
  for (std::size_t q = 0; q < inflow.size(); ++q)
    rhs(op.cells_rows() + static_cast<int>(q)) = inflow[q];

  Eigen::VectorXd x = op.lu.solve(rhs);
  require(x.allFinite(), ErrorCategory::Numerical,
          "layer solve failed (reciprocal condition estimate " +
              std::to_string(op.rcond) + ")");

  LayerSolution sol;
  sol.f.resize(N, M);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < M; ++k) sol.f(i, k) = x(op.index(i, k));
  double num = 0.0;
  for (int k : ord.incoming) num += ord.weights[k] * ord.mu[k] * sol.f(N - 1, k);
  sol.far_field = num / incoming_flux_norm(ord);
  for (int k = 0; k < M; ++k)
    sol.remainder = std::max(sol.remainder, std::abs(sol.f(N - 1, k) - sol.far_field));
  return sol;
}

std::vector<double> flux_moment(const OrdinateSet& ord, const LayerSolution& sol) {
  require(sol.f.cols() == ord.size(), ErrorCategory::Argument,
          "solution does not match the ordinate set");
  std::vector<double> J(sol.f.rows(), 0.0);
  for (int i = 0; i < sol.f.rows(); ++i)
    for (int k = 0; k < ord.size(); ++k)
      J[i] += ord.weights[k] * ord.mu[k] * sol.f(i, k);
  return J;
}

AlbedoData extract_albedo(const TransportOperator& op) {
  const auto& ord = op.ordinates;
  const int nin = static_cast<int>(ord.incoming.size());
  const int nout = static_cast<int>(ord.outgoing.size());
  const int N = op.grid.size();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(op.unknowns(), nin);
  for (int b = 0; b < nin; ++b) rhs(op.cells_rows() + b, b) = 1.0;
  Eigen::MatrixXd X = op.lu.solve(rhs);
  require_finite(X, "albedo solve");

  const double norm = incoming_flux_norm(ord);
  AlbedoData a;
  a.W.resize(nin);
  a.G0.resize(nout, nin);
  a.R.resize(nout, nin);
  a.far_remainder.resize(nin);
  for (int b = 0; b < nin; ++b) {
    const double wb = ord.weights[ord.incoming[b]];
    double F = 0.0;
    for (int k : ord.incoming)
      F += ord.weights[k] * ord.mu[k] * X(op.index(N - 1, k), b);
    F /= norm;
    a.W[b] = F / wb;
    double rem = 0.0;
    for (int k = 0; k < ord.size(); ++k)
      rem = std::max(rem, std::abs(X(op.index(N - 1, k), b) - F));
    a.far_remainder[b] = rem / wb;
    for (int q = 0; q < nout; ++q) {
      const double f0 = X(op.index(0, ord.outgoing[q]), b);
      a.R(q, b) = f0;
      a.G0(q, b) = (f0 - F) / wb;
    }
  }
  return a;
}

std::vector<double> reflection_R(const AlbedoData& albedo,
                                 const OrdinateSet& ord,
                                 std::span<const double> inflow) {
  require(inflow.size() == ord.incoming.size(), ErrorCategory::Argument,
          "inflow must have one value per incoming ordinate");
  const int nin = static_cast<int>(ord.incoming.size());
  double far = 0.0;
  for (int b = 0; b < nin; ++b)
    far += albedo.W[b] * inflow[b] * ord.weights[ord.incoming[b]];
  std::vector<double> out(ord.outgoing.size(), far);
  for (std::size_t q = 0; q < out.size(); ++q)
    for (int b = 0; b < nin; ++b)
      out[q] += albedo.G0(static_cast<int>(q), b) * inflow[b] *
                ord.weights[ord.incoming[b]];
  return out;
}

std::vector<double> reflection_R_adjoint(const AlbedoData& albedo,
                                         const OrdinateSet& ord,
                                         std::span<const double> outgoing) {
  require(outgoing.size() == ord.outgoing.size(), ErrorCategory::Argument,
          "adjoint input must live on the outgoing ordinates");
  std::vector<double> in(ord.incoming.size(), 0.0);
  for (std::size_t b = 0; b < in.size(); ++b) {
    for (std::size_t q = 0; q < outgoing.size(); ++q)
      in[b] += ord.weights[ord.outgoing[q]] * outgoing[q] *
               albedo.R(static_cast<int>(q), static_cast<int>(b));
    in[b] /= ord.weights[ord.incoming[b]];
  }
  return in;
}

Eigen::MatrixXd prompt_matrix(const OrdinateSet& ord, PromptKind kind) {
  const int nin = static_cast<int>(ord.incoming.size());
  const int nout = static_cast<int>(ord.outgoing.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(nin, nout);
  if (kind == PromptKind::Specular) {
    for (int q = 0; q < nin; ++q) {
      const int target = ord.mirror[ord.incoming[q]];
      auto it = std::find(ord.outgoing.begin(), ord.outgoing.end(), target);
      require(it != ord.outgoing.end(), ErrorCategory::Internal,
              "mirror of an incoming ordinate is not outgoing");
      P(q, static_cast<int>(it - ord.outgoing.begin())) = 1.0;
    }
    return P;
  }
  const double norm = incoming_flux_norm(ord);
  for (int q = 0; q < nin; ++q)
    for (int a = 0; a < nout; ++a) {
      const int k = ord.outgoing[a];
      P(q, a) = std::abs(ord.mu[k]) * ord.weights[k] / norm;
    }
  return P;
}

Eigen::MatrixXd prompt_matrix(const OrdinateSet& ord,
                              const std::function<double(Vec2, Vec2)>& p,
                              double tol) {
  const int nin = static_cast<int>(ord.incoming.size());
  const int nout = static_cast<int>(ord.outgoing.size());
  Eigen::MatrixXd P(nin, nout);
  for (int a = 0; a < nout; ++a) {
    const int ka = ord.outgoing[a];
    double mass = 0.0;
    for (int q = 0; q < nin; ++q) {
      const int kq = ord.incoming[q];
      const double pv = p(ord.nodes[ka], ord.nodes[kq]);
      require(pv >= 0.0 && std::isfinite(pv), ErrorCategory::Validation,
              "prompt reflection kernel must be non-negative and finite");
      mass += pv * ord.weights[kq];
      P(q, a) = std::abs(ord.mu[ka]) * pv * ord.weights[ka] / ord.mu[kq];
    }
    require(std::abs(mass - 1.0) <= tol, ErrorCategory::Validation,
            "prompt reflection kernel violates particle conservation: "
            "integral over incoming directions is " + std::to_string(mass));
  }
  return P;
}

std::vector<double> prompt_P(const Eigen::MatrixXd& P,
                             std::span<const double> outgoing) {
  require(static_cast<int>(outgoing.size()) == P.cols(), ErrorCategory::Argument,
          "prompt reflection input must live on the outgoing ordinates");
  Eigen::Map<const Eigen::VectorXd> f(outgoing.data(), P.cols());
  Eigen::VectorXd g = P * f;
  return {g.data(), g.data() + g.size()};
}

std::vector<double> prompt_P_adjoint(const Eigen::MatrixXd& P,
                                     const OrdinateSet& ord,
                                     std::span<const double> incoming) {
  require(static_cast<int>(incoming.size()) == P.rows(), ErrorCategory::Argument,
          "adjoint input must live on the incoming ordinates");
  std::vector<double> out(P.cols(), 0.0);
  for (int a = 0; a < P.cols(); ++a) {
    for (int q = 0; q < P.rows(); ++q)
      out[a] += ord.weights[ord.incoming[q]] * incoming[q] * P(q, a);
    out[a] /= ord.weights[ord.outgoing[a]];
  }
  return out;
}

ThetaResult theta_nullspace(const AlbedoData& albedo, const Eigen::MatrixXd& P,
                            const OrdinateSet& ord) {
  const int nin = static_cast<int>(ord.incoming.size());
  require(P.rows() == nin && P.cols() == albedo.R.rows() && albedo.R.cols() == nin,
          ErrorCategory::Argument, "P and R shapes do not match the ordinates");
  const Eigen::MatrixXd K = Eigen::MatrixXd::Identity(nin, nin) - P * albedo.R;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  ThetaResult t;
  t.sigma_min = sv(nin - 1);
  t.sigma_next = nin > 1 ? sv(nin - 2) : 0.0;
  if (!(t.sigma_next > 1e3 * t.sigma_min))
    fail(ErrorCategory::Degeneracy,
         "null space of 1 - PR is not one-dimensional (smallest singular "
         "values " + std::to_string(t.sigma_min) + ", " +
             std::to_string(t.sigma_next) + ")");
  Eigen::VectorXd v = svd.matrixV().col(nin - 1);
  if (v.sum() < 0.0) v = -v;
  if (v.minCoeff() <= 0.0)
    fail(ErrorCategory::Degeneracy, "null vector of 1 - PR is not positive");
  double s = 0.0;
  for (int b = 0; b < nin; ++b)
    s += albedo.W[b] * v(b) * ord.weights[ord.incoming[b]];
  require(s > 0.0, ErrorCategory::Degeneracy,
          "Theta cannot be normalized against W");
  v /= s;
  t.theta.assign(v.data(), v.data() + nin);
  t.residual = (K * v).cwiseAbs().maxCoeff();
  Eigen::VectorXd wmu(nin);
  for (int b = 0; b < nin; ++b)
    wmu(b) = ord.weights[ord.incoming[b]] * ord.mu[ord.incoming[b]];
  t.adjoint_residual = (K.transpose() * wmu).cwiseAbs().maxCoeff();
  return t;
}

A0Result recover_a0(double u0, std::span<const double> theta,
                    std::span<const double> W, const OrdinateSet& ord) {
  require(theta.size() == ord.incoming.size() && W.size() == theta.size(),
          ErrorCategory::Argument, "Theta and W must live on incoming ordinates");
  double sw = 0.0, swt = 0.0;
  for (std::size_t b = 0; b < W.size(); ++b) {
    const double w = ord.weights[ord.incoming[b]];
    sw += W[b] * w;
    swt += W[b] * theta[b] * w;
  }
  require(swt != 0.0, ErrorCategory::Degeneracy, "sum W Theta vanishes");
  A0Result r;
  r.a0 = u0 * sw / swt;
  r.ell0.resize(theta.size());
  for (std::size_t b = 0; b < theta.size(); ++b) {
    r.ell0[b] = r.a0 * theta[b] - u0;
    r.necessary += W[b] * r.ell0[b] * ord.weights[ord.incoming[b]];
  }
  return r;
}

namespace {

std::pair<double, double> h_pair(double C_alpha, double chi, PromptKind kind,
                                 int count, Vec2 g, OrdinateRule rule) {
  const auto ord = OrdinateSet::make(rule, count);
  const auto P = prompt_matrix(ord, kind);
  std::vector<double> vg(ord.outgoing.size()), vn(ord.outgoing.size());
  for (std::size_t a = 0; a < vg.size(); ++a) {
    vg[a] = dot(ord.nodes[ord.outgoing[a]], g);
    vn[a] = ord.mu[ord.outgoing[a]];
  }
  const auto Pg = prompt_P(P, vg);
  const auto Pn = prompt_P(P, vn);
  double adv = 0.0, frac = 0.0;
  for (std::size_t q = 0; q < ord.incoming.size(); ++q) {
    const int k = ord.incoming[q];
    const double wm = ord.weights[k] * ord.mu[k];
    adv += wm * (dot(ord.nodes[k], g) - Pg[q]);
    frac += wm * (ord.mu[k] - Pn[q]);
  }
  return {chi * adv, -C_alpha * frac};
}

} // namespace

HCoefficients boundary_operator_H(double C_alpha, double chi, PromptKind kind,
                                  int ordinates, Vec2 grad_rho_wall,
                                  OrdinateRule rule) {
  require(std::isfinite(C_alpha) && std::isfinite(chi), ErrorCategory::Domain,
          "H needs finite C_alpha and chi");
  auto [a1, f1] = h_pair(C_alpha, chi, kind, ordinates, grad_rho_wall, rule);
  auto [a2, f2] = h_pair(C_alpha, chi, kind, 2 * ordinates, grad_rho_wall, rule);
  return {a1, f1, std::abs(a2 - a1), std::abs(f2 - f1)};
}

FluxConstants flux_constants(double alpha, double tau0, double nu1, int n) {
  require(alpha > 1.0 && alpha < 2.0, ErrorCategory::Domain,
          "layer flux constants need 1 < alpha < 2 (sin(pi alpha) vanishes at 2)");
  require(tau0 > 0.0, ErrorCategory::Domain, "tau0 must be positive");
  require(std::abs(1.0 - nu1) > 1e-14, ErrorCategory::Domain,
          "nu1 = 1 makes the layer flux coefficient vanish (division by zero)");
  const double S = kinetic::sphere_area(n);
  FluxConstants c;
  c.C_tilde = (alpha - 1.0) * n * (1.0 - nu1) / tau0;
  c.D_alpha = kPi * tau0 * tau0 * (1.0 - alpha) * (1.0 - alpha) *
              (n * n * nu1 - S) /
              (std::sin(kPi * alpha) * std::tgamma(alpha) * S);
  return c;
}

std::vector<double> boundary_flux_w1(const std::vector<double>& r,
                                     const std::vector<double>& u,
                                     double alpha, double tau0, double c0,
                                     double nu1, int n) {
  const int N = static_cast<int>(r.size());
  require(N >= 3 && u.size() == r.size(), ErrorCategory::Argument,
          "w1 needs a profile with at least 3 samples on the grid");
  const auto c = flux_constants(alpha, tau0, nu1, n);
  const double beta = alpha - 1.0;
  const Eigen::MatrixXd D = caputo_matrix(r, beta, true);
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), N);
  const Eigen::VectorXd frac = D * uv;

  // Second-order three-point derivative on a nonuniform grid.
  auto deriv = [&](int i0, int at) {
    const double x0 = r[i0], x1 = r[i0 + 1], x2 = r[i0 + 2], x = r[at];
    const double l0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    return l0 * u[i0] + l1 * u[i0 + 1] + l2 * u[i0 + 2];
  };
  const double cb = std::pow(c0, beta);
  std::vector<double> w(N);
  for (int i = 0; i < N; ++i) {
    const int i0 = std::clamp(i - 1, 0, N - 3);
    w[i] = -deriv(i0, i) / c.C_tilde + c.D_alpha / c.C_tilde * cb * frac(i);
  }
  return w;
}

double matching_residual(std::span<const double> times,
                         std::span<const double> interior,
                         std::span<const double> layer) {
  require(times.size() >= 3, ErrorCategory::Argument,
          "matching residual needs at least 3 time samples");
  require(interior.size() == times.size() && layer.size() == times.size(),
          ErrorCategory::Argument, "mass series must share the time samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], ErrorCategory::Argument,
            "sample times must be strictly increasing");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const double dm = (interior[i + 1] - layer[i + 1]) - (interior[i - 1] - layer[i - 1]);
    worst = std::max(worst, std::abs(dm / (times[i + 1] - times[i - 1])));
  }
  return worst;
}

CurvedCheck curved_conservation_check(const VectorField& w, double R,
                                      double delta, int panels, int order) {
  require(R > 0.0 && std::isfinite(R), ErrorCategory::Geometry,
          "disc radius must be positive");
  require(delta > 0.0 && delta < R, ErrorCategory::Geometry,
          "strip width must lie in (0, R)");
  require(panels >= 1 && order >= 1 && order <= 64, ErrorCategory::Argument,
          "quadrature needs panels >= 1 and 1 <= order <= 64");
  require(static_cast<bool>(w.value) && static_cast<bool>(w.jacobian),
          ErrorCategory::Argument, "vector field needs value and Jacobian");

  // Gauss-Legendre rule on [-1, 1].
  std::vector<double> x, wt;
  for (double z : boost::math::legendre_p_zeros<double>(order)) {
    const double dp = boost::math::legendre_p_prime(order, z);
    const double wz = 2.0 / ((1.0 - z * z) * dp * dp);
    x.push_back(z);
    wt.push_back(wz);
    if (z != 0.0) {
      x.push_back(-z);
      wt.push_back(wz);
    }
  }

  auto psi_at = [&](double rad, double phi, double& psi, double& dpsi) {
    const Vec2 e{std::cos(phi), std::sin(phi)};
    const Vec2 nu = -e;
    const Vec2 p = rad * e;
    psi = dot(nu, w.value(p));
    const auto J = w.jacobian(p);
    const Vec2 Jn{J[0] * nu.x + J[1] * nu.y, J[2] * nu.x + J[3] * nu.y};
    dpsi = dot(nu, Jn);
  };

  const double r_in = R - delta;
  const double hphi = 2.0 * kPi / panels;
  const double hr = delta / panels;
  CurvedCheck c;
  double psi = 0.0, dpsi = 0.0;
  for (int pp = 0; pp < panels; ++pp) {
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double phi = hphi * (pp + 0.5 * (x[a] + 1.0));
      const double wphi = 0.5 * hphi * wt[a];
      psi_at(r_in, phi, psi, dpsi);
      c.inner_edge += wphi * r_in * psi;
      psi_at(R, phi, psi, dpsi);
      c.wall += wphi * R * psi;
      for (int pr = 0; pr < panels; ++pr) {
        for (std::size_t b = 0; b < x.size(); ++b) {
          const double rad = r_in + hr * (pr + 0.5 * (x[b] + 1.0));
          const double wr = 0.5 * hr * wt[b];
          psi_at(rad, phi, psi, dpsi);
          c.strip_integral += wphi * wr * rad * (-psi / rad + dpsi);
        }
      }
    }
  }
  c.residual = std::abs(c.strip_integral - (c.inner_edge - c.wall)) /
               (2.0 * kPi * R);
  return c;
}

} // namespace frackix::layer
