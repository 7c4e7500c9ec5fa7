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

#include "frackix/mc_simulator.hpp"

#include "frackix/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace frackix::mc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kChunk = 4096;

} // namespace

DomainGeometry DomainGeometry::interval(double length) {
  require(length > 0.0 && std::isfinite(length), ErrorCategory::Configuration,
          "interval length must be > 0");
  return {GeometryKind::Interval, length};
}

DomainGeometry DomainGeometry::disc(double radius) {
  require(radius > 0.0 && std::isfinite(radius), ErrorCategory::Configuration,
          "disc radius must be > 0");
  return {GeometryKind::Disc, radius};
}

bool DomainGeometry::contains(Vec2 x, double tol) const {
  if (kind == GeometryKind::Interval)
    return x.x >= -tol && x.x <= extent + tol;
  return norm(x) <= extent + tol;
}

double DomainGeometry::wall_distance(Vec2 x) const {
  if (kind == GeometryKind::Interval)
    return std::min(x.x, extent - x.x);
  return extent - norm(x);
}

Vec2 DomainGeometry::inner_normal(Vec2 x) const {
  if (kind == GeometryKind::Interval)
    return {x.x < 0.5 * extent ? 1.0 : -1.0, 0.0};
  const double r = norm(x);
  require(r > 0.0, ErrorCategory::Geometry, "normal undefined at the disc center");
  return x * (-1.0 / r);
}

namespace {

ParticleState advect_interval(ParticleState s, double distance, double L) {
  const double dir = s.direction.x >= 0.0 ? 1.0 : -1.0;
  const double y = s.position.x + dir * distance;
  const double k = std::floor(y / L);
  require(std::fabs(k) <= static_cast<double>(kMaxReflections),
          ErrorCategory::Runaway,
          "more than " + std::to_string(kMaxReflections) +
              " wall reflections in one run");
  const auto ki = static_cast<long long>(k);
  double x;
  if (ki % 2 == 0) {
    x = y - k * L;
    s.direction = {dir, 0.0};
  } else {
    x = (k + 1.0) * L - y;
    s.direction = {-dir, 0.0};
  }
  s.position = {std::clamp(x, 0.0, L), 0.0};
  return s;
}

ParticleState advect_disc(ParticleState s, double distance, double R) {
  Vec2 x = s.position;
  Vec2 v = s.direction;
  double left = distance;
  for (long hits = 0;; ++hits) {
    require(hits <= kMaxReflections, ErrorCategory::Runaway,
            "more than " + std::to_string(kMaxReflections) +
                " wall reflections in one run");
    const double xv = dot(x, v);
    const double c = dot(x, x) - R * R;
    const double disc = std::max(xv * xv - c, 0.0);
    // Distance to the wall along v; the stable root form avoids cancellation.
    const double root = std::sqrt(disc);
    double t = xv > 0.0 ? -c / (xv + root) : root - xv;
    if (t < 0.0)
      t = 0.0;
    if (t >= left) {
      x = x + v * left;
      break;
    }
    x = x + v * t;
    left -= t;
    double r = norm(x);
    if (r > R)
      x = x * (R / r), r = R;
    const Vec2 nu = x * (-1.0 / r);
    v = kinetic::specular_reflect(v, nu);
    v = v * (1.0 / norm(v));
    x = x + nu * 1e-14;
  }
  const double r = norm(x);
  if (r > R)
    x = x * (R / r);
  s.position = x;
  s.direction = v;
  return s;
}

} // namespace

ParticleState advect_and_reflect(const ParticleState& state, double duration,
                                 double speed, const DomainGeometry& geom) {
  require(duration >= 0.0, ErrorCategory::Argument, "duration must be >= 0");
  const double distance = speed * duration;
  if (geom.kind == GeometryKind::Interval)
    return advect_interval(state, distance, geom.extent);
  return advect_disc(state, distance, geom.extent);
}

double run_scale(const kinetic::ModelParams& params, Vec2 direction,
                 Vec2 grad_rho) {
  const double d = std::sqrt(params.epsilon) * params.c0 * dot(direction, grad_rho);
  return std::max(params.tau0 + params.tau1 * d, 0.01 * params.tau0);
}

ParticleState tumble(const ParticleState& state,
                     const kinetic::ChemicalField& field,
                     const kinetic::ModelParams& params,
                     const kinetic::TurnKernel& kernel,
                     const DomainGeometry& geom, RandomStream& rng) {
  ParticleState s = state;
  s.direction = kinetic::sample_direction(rng, kernel, state.direction);
  if (geom.wall_distance(s.position) <= 1e-12 * geom.extent) {
    const Vec2 nu = geom.inner_normal(s.position);
    if (dot(s.direction, nu) < 0.0)
      s.direction = kinetic::specular_reflect(s.direction, nu);
  }
  const double b = run_scale(params, s.direction, field.grad_rho(s.position));
  s.remaining_run = std::pow(params.epsilon, 1.0 + params.mu) *
                    kinetic::sample_run_time(rng, params.alpha, b);
  return s;
}

DensityHistogram DensityHistogram::make(const DomainGeometry& geom, int bins) {
  require(bins >= 1, ErrorCategory::Configuration, "need at least one bin");
  DensityHistogram h;
  h.kind = geom.kind;
  h.lo = 0.0;
  h.hi = geom.extent;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  return h;
}

double DensityHistogram::bin_volume(int i) const {
  if (kind == GeometryKind::Interval)
    return bin_width();
  const double a = lo + i * bin_width(), b = lo + (i + 1) * bin_width();
  return kPi * (b * b - a * a);
}

std::uint64_t DensityHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts)
    t += c;
  return t;
}

int DensityHistogram::locate(Vec2 x) const {
  const double c = kind == GeometryKind::Interval ? x.x : norm(x);
  const double tol = 1e-9 * (hi - lo);
  if (c < lo - tol || c > hi + tol)
    return -1;
  int i = static_cast<int>(std::floor((c - lo) / bin_width()));
  return std::clamp(i, 0, bins() - 1);
}

std::vector<double> DensityHistogram::density() const {
  const double n = static_cast<double>(total());
  std::vector<double> d(counts.size(), 0.0);
  if (n == 0.0)
    return d;
  for (int i = 0; i < bins(); ++i)
    d[i] = static_cast<double>(counts[i]) / (n * bin_volume(i));
  return d;
}

DensityHistogram empirical_density(std::span<const Vec2> positions,
                                   const DomainGeometry& geom, int bins) {
  auto h = DensityHistogram::make(geom, bins);
  for (const Vec2& x : positions) {
    const int i = h.locate(x);
    require(i >= 0, ErrorCategory::Internal,
            "particle outside the domain at (" + std::to_string(x.x) + ", " +
                std::to_string(x.y) + ")");
    ++h.counts[i];
  }
  return h;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACKIX_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0)
      n = std::min(n, cap);
  }
  return std::max(n, 1);
}

namespace {

void validate(const EnsembleConfig& c) {
  require(c.particles >= 1, ErrorCategory::Configuration,
          "need at least one particle");
  require(c.horizon >= 0.0, ErrorCategory::Configuration, "horizon must be >= 0");
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
    require(c.snapshot_times[i] >= 0.0 && c.snapshot_times[i] <= c.horizon,
            ErrorCategory::Configuration,
            "snapshot times must lie in [0, horizon]");
    require(i == 0 || c.snapshot_times[i] > c.snapshot_times[i - 1],
            ErrorCategory::Configuration,
            "snapshot times must be strictly ascending");
  }
  require(c.kernel.dimension() == c.geometry.dimension(),
          ErrorCategory::Configuration,
          "kernel dimension does not match the geometry");
  require(c.start_width >= 0.0, ErrorCategory::Configuration,
          "start_width must be >= 0");
}

struct Tally {
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> strip;
  std::uint64_t tumbles = 0;
};

Vec2 initial_position(const EnsembleConfig& c, RandomStream& rng) {
  const double L = c.geometry.extent;
  const double w = c.start_width;
  if (c.geometry.kind == GeometryKind::Interval) {
    const double x0 = std::isnan(c.start) ? 0.5 * L : c.start;
    return {std::clamp(x0 + w * (rng.uniform() - 0.5), 0.0, L), 0.0};
  }
  const double x0 = std::isnan(c.start) ? 0.0 : c.start;
  const double r = 0.5 * w * std::sqrt(rng.uniform());
  const double a = 2.0 * kPi * rng.uniform();
  Vec2 x{x0 + r * std::cos(a), r * std::sin(a)};
  const double nx = norm(x);
  if (nx > L)
    x = x * (L / nx);
  return x;
}

Vec2 initial_direction(const EnsembleConfig& c, RandomStream& rng) {
  if (c.geometry.kind == GeometryKind::Interval)
    return {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0};
  const double a = 2.0 * kPi * rng.uniform();
  return {std::cos(a), std::sin(a)};
}

void run_chunk(const EnsembleConfig& c, std::uint64_t chunk, Tally& tally,
               const DensityHistogram& proto) {
  RandomStream rng = RandomStream(c.seed).split(chunk);
  const std::uint64_t first = chunk * kChunk;
  const std::uint64_t last = std::min(c.particles, first + kChunk);
  const double speed = c.params.c0 / std::sqrt(c.params.epsilon);
  const auto& times = c.snapshot_times;
  const std::size_t nsnap = times.size();

  for (std::uint64_t p = first; p < last; ++p) {
    ParticleState s;
    s.position = initial_position(c, rng);
    s.direction = initial_direction(c, rng);
    const double b = run_scale(c.params, s.direction,
                               c.field.grad_rho(s.position));
    s.remaining_run = std::pow(c.params.epsilon, 1.0 + c.params.mu) *
                      kinetic::sample_run_time(rng, c.params.alpha, b);
    double t = 0.0;
    std::size_t si = 0;
    while (si < nsnap) {
      const double t_end = t + s.remaining_run;
      while (si < nsnap && times[si] <= t_end) {
        s = advect_and_reflect(s, times[si] - t, speed, c.geometry);
        s.remaining_run = t_end - times[si];
        t = times[si];
        const int bin = proto.locate(s.position);
        require(bin >= 0, ErrorCategory::Internal, "particle left the domain");
        ++tally.counts[si][bin];
        if (c.geometry.wall_distance(s.position) < c.strip_width)
          ++tally.strip[si];
        ++si;
      }
      if (si == nsnap)
        break;
      s = advect_and_reflect(s, t_end - t, speed, c.geometry);
      t = t_end;
      s = tumble(s, c.field, c.params, c.kernel, c.geometry, rng);
      ++tally.tumbles;
    }
  }
}

} // namespace

EnsembleResult simulate_ensemble(const EnsembleConfig& config) {
  validate(config);
  const auto proto = DensityHistogram::make(config.geometry, config.bins);
  const std::size_t nsnap = config.snapshot_times.size();
  const std::uint64_t chunks = (config.particles + kChunk - 1) / kChunk;
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(chunks, static_cast<std::uint64_t>(
                                          worker_count(config.threads))));

  Tally total;
  total.counts.assign(nsnap, std::vector<std::uint64_t>(proto.counts.size(), 0));
  total.strip.assign(nsnap, 0);

  std::atomic<std::uint64_t> next{0};
  std::mutex merge;
  std::exception_ptr error;
  auto work = [&]() {
    Tally local;
    local.counts.assign(nsnap, std::vector<std::uint64_t>(proto.counts.size(), 0));
    local.strip.assign(nsnap, 0);
    try {
      for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;)
        run_chunk(config, c, local, proto);
    } catch (...) {
      std::lock_guard lock(merge);
      if (!error)
        error = std::current_exception();
      next = chunks;
      return;
    }
    std::lock_guard lock(merge);
    for (std::size_t s = 0; s < nsnap; ++s) {
      for (std::size_t b = 0; b < proto.counts.size(); ++b)
        total.counts[s][b] += local.counts[s][b];
      total.strip[s] += local.strip[s];
    }
    total.tumbles += local.tumbles;
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work);
    for (auto& th : pool)
      th.join();
  }
  if (error)
    std::rethrow_exception(error);

  EnsembleResult out;
  for (std::size_t s = 0; s < nsnap; ++s) {
    DensityHistogram h = proto;
    h.time = config.snapshot_times[s];
    h.counts = total.counts[s];
    require(h.total() == config.particles, ErrorCategory::Internal,
            "particle count not conserved at t = " + std::to_string(h.time));
    out.snapshots.push_back(std::move(h));
  }
  out.strip_counts = total.strip;
  out.tumbles = total.tumbles;
  return out;
}

double hill_tail_index(std::span<const double> samples, int k) {
  require(k >= 10 && static_cast<std::size_t>(k) < samples.size(),
          ErrorCategory::Argument,
          "Hill estimator needs 10 <= k < sample count, got k = " +
              std::to_string(k));
  std::vector<double> top(samples.begin(), samples.end());
  std::partial_sort(top.begin(), top.begin() + k + 1, top.end(),
                    std::greater<>());
  require(top[k] > 0.0, ErrorCategory::Argument,
          "Hill estimator needs positive order statistics");
  const double threshold = std::log(top[k]);
  double s = 0.0;
  for (int i = 0; i < k; ++i)
    s += std::log(top[i]) - threshold;
  return k / s;
}

HillDiagnostic hill_plateau(std::span<const double> samples,
                            std::span<const int> ks, double tolerance) {
  require(!ks.empty(), ErrorCategory::Argument, "need at least one k");
  HillDiagnostic d;
  d.ks.assign(ks.begin(), ks.end());
  for (int k : ks)
    d.estimates.push_back(hill_tail_index(samples, k));
  auto sorted = d.estimates;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  d.relative_spread = (sorted.back() - sorted.front()) / median;
  d.plateau = d.relative_spread <= tolerance;
  return d;
}

} // namespace frackix::mc
