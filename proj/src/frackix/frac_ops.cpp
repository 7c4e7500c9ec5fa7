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

#include "frackix/frac_ops.hpp"

#include "frackix/error.hpp"
#include "frackix/format.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace frackix::frac {

std::string to_string(Side s) {
  switch (s) {
  case Side::Left: return "left";
  case Side::Right: return "right";
  case Side::Symmetric: return "symmetric";
  }
  return "symmetric";
}

std::string to_string(Boundary b) {
  return b == Boundary::Reflecting ? "reflecting" : "absorbing";
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  if (s == "symmetric") return Side::Symmetric;
  fail(ErrorCategory::Configuration,
       "operator side must be left, right or symmetric, got '" + s + "'");
}

std::vector<double> grunwald_weights(double beta, int count) {
  require(beta > 0.0, ErrorCategory::Domain,
          "Grünwald order must be > 0, got " + std::to_string(beta));
  require(count >= 1, ErrorCategory::Argument,
          "Grünwald weight count must be >= 1");
  std::vector<double> g(static_cast<std::size_t>(count));
  g[0] = 1.0;
  for (int k = 1; k < count; ++k)
    g[k] = g[k - 1] * (k - 1 - beta) / k;
  return g;
}

int default_truncation(int n_cells) { return std::max(8 * n_cells, 64); }

double fractional_laplacian_constant(double alpha) {
  require(alpha > 1.0 && alpha <= 2.0, ErrorCategory::Domain,
          "alpha must lie in (1, 2]");
  return -std::cos(std::numbers::pi * alpha / 2.0);
}

namespace {

void check_inputs(double alpha, int n_cells, double h) {
  require(alpha > 1.0 && alpha <= 2.0, ErrorCategory::Domain,
          "alpha must lie in (1, 2], got " + std::to_string(alpha));
  require(n_cells >= 4, ErrorCategory::Configuration,
          "fractional operators need N >= 4 cells, got " +
              std::to_string(n_cells));
  require(h > 0.0 && std::isfinite(h), ErrorCategory::Configuration,
          "grid spacing must be positive");
}

// Index of the cell that extension index e maps to, or -1 outside (absorbing).
int fold_index(long e, int n, Boundary bc) {
  if (bc == Boundary::Absorbing)
    return (e >= 0 && e < n) ? static_cast<int>(e) : -1;
  const long period = 2L * n;
  long r = e % period;
  if (r < 0)
    r += period;
  return static_cast<int>(r < n ? r : period - 1 - r);
}

// Weights of the Grünwald series folded onto one period P of a periodic
// sequence: W_r = sum_j g_{r + j P}. Terms beyond `terms` use the power-law
// asymptote g_k ~ c k^(-1-beta) integrated in j; the result is shifted so
// that sum_r W_r = 0 exactly as for the full series.
std::vector<double> periodized_weights(double beta, int period, int terms) {
  const int J = std::max(1, (terms + period - 1) / period);
  const long K = static_cast<long>(J) * period;
  const auto g = grunwald_weights(beta, static_cast<int>(K) + 1);
  std::vector<double> w(static_cast<std::size_t>(period), 0.0);
  for (long k = 0; k < K; ++k)
    w[k % period] += g[k];
  const double c = g[K] * std::pow(static_cast<double>(K), 1.0 + beta);
  for (int r = 0; r < period; ++r)
    w[r] += c * std::pow(r + (J - 0.5) * period, -beta) / (beta * period);
  double total = 0.0;
  for (double v : w)
    total += v;
  w[0] -= total;
  return w;
}

// Face gradient without the h^-beta factor.
Eigen::MatrixXd unscaled_gradient(double beta, int n, Side side, Boundary bc,
                                  int truncation) {
  const int K = truncation > 0 ? truncation : default_truncation(n);
  const double wl = side == Side::Right ? 0.0 : (side == Side::Left ? 1.0 : 0.5);
  const double wr = side == Side::Left ? 0.0 : (side == Side::Right ? 1.0 : 0.5);

  // The even extension is 2N-periodic; the zero extension needs N + 1 terms.
  const std::vector<double> g = bc == Boundary::Reflecting
                                    ? periodized_weights(beta, 2 * n, K)
                                    : grunwald_weights(beta, n + 1);
  const int terms = static_cast<int>(g.size());

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n);
  for (int f = 0; f <= n; ++f) {
    if (bc == Boundary::Reflecting && (f == 0 || f == n))
      continue;
    if (wl != 0.0)
      for (int k = 0; k < terms; ++k) {
        int c = fold_index(static_cast<long>(f) - k, n, bc);
        if (c >= 0)
          m(f, c) += wl * g[k];
      }
    if (wr != 0.0)
      for (int k = 0; k < terms; ++k) {
        int c = fold_index(static_cast<long>(f) - 1 + k, n, bc);
        if (c >= 0)
          m(f, c) -= wr * g[k];
      }
  }
  return m;
}

// Rounds every entry to a multiple of q = 2^(e - 50), 2^e > max |entry|, and
// makes each row sum exactly zero. Sums of such entries are then exact.
void snap_rows_to_dyadic_grid(Eigen::MatrixXd& m) {
  const double peak = m.cwiseAbs().maxCoeff();
  if (peak == 0.0)
    return;
  const double q = std::ldexp(1.0, std::ilogb(peak) + 1 - 50);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    Eigen::Index big = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = std::nearbyint(m(i, j) / q) * q;
      sum += m(i, j);
      if (std::fabs(m(i, j)) > std::fabs(m(i, big)))
        big = j;
    }
    m(i, big) -= sum;
  }
}

} // namespace

FracOperatorMatrix build_frac_gradient_matrix(double alpha, int n_cells,
                                              double h, Side side,
                                              Boundary bc, int truncation) {
  check_inputs(alpha, n_cells, h);
  const double beta = alpha - 1.0;
  FracOperatorMatrix op;
  op.kind = OperatorKind::Gradient;
  op.alpha = alpha;
  op.order = beta;
  op.side = side;
  op.bc = bc;
  op.h = h;
  op.matrix = unscaled_gradient(beta, n_cells, side, bc, truncation) *
              (1.0 / std::pow(h, beta));
  return op;
}

FracOperatorMatrix build_divgrad_matrix(double alpha, int n_cells, double h,
                                        Side side, Boundary bc,
                                        int truncation) {
  check_inputs(alpha, n_cells, h);
  const double beta = alpha - 1.0;
  Eigen::MatrixXd faces = unscaled_gradient(beta, n_cells, side, bc, truncation) *
                          (1.0 / (std::pow(h, beta) * h));
  // At beta = 1 the stencil is already an exact integer multiple of 1/h^2.
  if (bc == Boundary::Reflecting && beta != 1.0)
    snap_rows_to_dyadic_grid(faces);

  FracOperatorMatrix op;
  op.kind = OperatorKind::DivGrad;
  op.alpha = alpha;
  op.order = alpha;
  op.side = side;
  op.bc = bc;
  op.h = h;
  op.matrix = faces.bottomRows(n_cells) - faces.topRows(n_cells);
  return op;
}

FracOperatorMatrix build_reflecting_divgrad_matrix(double alpha, int n_cells,
                                                   double h) {
  return build_divgrad_matrix(alpha, n_cells, h, Side::Symmetric,
                              Boundary::Reflecting);
}

std::vector<double> apply_operator(const FracOperatorMatrix& op,
                                   std::span<const double> values) {
  require(static_cast<Eigen::Index>(values.size()) == op.matrix.cols(),
          ErrorCategory::Argument,
          "operator has " + std::to_string(op.matrix.cols()) +
              " columns but the field has " + std::to_string(values.size()) +
              " values");
  Eigen::Map<const Eigen::VectorXd> x(values.data(),
                                      static_cast<Eigen::Index>(values.size()));
  Eigen::VectorXd y = op.matrix * x;
  return {y.data(), y.data() + y.size()};
}

void write_operator_csv(const FracOperatorMatrix& op, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::Io,
          "cannot open '" + path + "' for writing");
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      if (j)
        out << ',';
      out << format_double(op.matrix(i, j));
    }
    out << '\n';
  }
  require(static_cast<bool>(out), ErrorCategory::Io,
          "write to '" + path + "' failed");
}

} // namespace frackix::frac
