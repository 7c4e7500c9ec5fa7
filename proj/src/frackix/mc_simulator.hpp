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

// Monte Carlo simulation of the velocity-jump process in macroscopic units.
// With time-scaling parameter epsilon the particles move at speed
// epsilon^(-1/2) c0 and a run lasts epsilon^(1 + mu) tau, where tau follows
// the Lomax law with scale b = tau0 + tau1 epsilon^(1/2) c0 v . grad rho
// (clamped below at 0.01 tau0). This keeps the fractional limit independent
// of epsilon.

#include "frackix/kinetic_core.hpp"
#include "frackix/rng.hpp"
#include "frackix/vec2.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace frackix::mc {

enum class GeometryKind { Interval, Disc };

struct DomainGeometry {
  GeometryKind kind = GeometryKind::Interval;
  double extent = 1.0; // L for [0, L], R for the disc of radius R

  static DomainGeometry interval(double length);
  static DomainGeometry disc(double radius);

  int dimension() const { return kind == GeometryKind::Interval ? 1 : 2; }
  bool contains(Vec2 x, double tol = 0.0) const;
  /// Distance to the boundary (>= 0 inside).
  double wall_distance(Vec2 x) const;
  /// Inner unit normal at (or nearest to) x; for the disc -x/|x|.
  Vec2 inner_normal(Vec2 x) const;
};

struct ParticleState {
  Vec2 position;
  Vec2 direction{1.0, 0.0};
  double remaining_run = 0.0;
};

inline constexpr long kMaxReflections = 1'000'000;

/// Straight motion at `speed` for `duration` with specular reflection at
/// every wall hit. Throws Runaway after kMaxReflections hits.
ParticleState advect_and_reflect(const ParticleState& state, double duration,
                                 double speed, const DomainGeometry& geom);

/// Run-time scale b = max(tau0 + tau1 D, 0.01 tau0), D = epsilon^(1/2) c0 v . grad rho.
double run_scale(const kinetic::ModelParams& params, Vec2 direction,
                 Vec2 grad_rho);

/// Reorientation: new direction from the kernel (reflected if it points out
/// of the domain while on the wall), fresh run time in macroscopic units.
ParticleState tumble(const ParticleState& state,
                     const kinetic::ChemicalField& field,
                     const kinetic::ModelParams& params,
                     const kinetic::TurnKernel& kernel,
                     const DomainGeometry& geom, RandomStream& rng);

/// Histogram over [lo, hi]. For the disc the bins are annuli in radius and
/// the density is per unit area.
struct DensityHistogram {
  GeometryKind kind = GeometryKind::Interval;
  double lo = 0.0;
  double hi = 1.0;
  double time = 0.0;
  std::vector<std::uint64_t> counts;

  static DensityHistogram make(const DomainGeometry& geom, int bins);
  int bins() const { return static_cast<int>(counts.size()); }
  double bin_width() const { return (hi - lo) / bins(); }
  double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }
  double bin_volume(int i) const;
  std::uint64_t total() const;
  int locate(Vec2 x) const;
  /// Normalized density: count / (total * bin volume).
  std::vector<double> density() const;
};

/// Bins the positions and returns the histogram; positions outside the
/// domain are an internal error.
DensityHistogram empirical_density(std::span<const Vec2> positions,
                                   const DomainGeometry& geom, int bins);

struct EnsembleConfig {
  std::uint64_t particles = 10000;
  double horizon = 1.0;
  std::vector<double> snapshot_times{1.0};
  kinetic::ModelParams params;
  kinetic::TurnKernel kernel = kinetic::TurnKernel::uniform(1);
  DomainGeometry geometry;
  kinetic::ChemicalField field = kinetic::ChemicalField::constant(0.0);
  /// Initial cloud: uniform on [start - w/2, start + w/2] (interval) or in
  /// the disc of diameter w around (start, 0). NaN start means the center.
  double start = std::numeric_limits<double>::quiet_NaN();
  double start_width = 0.0;
  int bins = 100;
  /// Particles closer than this to the wall are counted per snapshot.
  double strip_width = 0.0;
  std::uint64_t seed = 1;
  /// 0: FRACKIX_THREADS or hardware concurrency.
  int threads = 0;
};

struct EnsembleResult {
  std::vector<DensityHistogram> snapshots;
  std::vector<std::uint64_t> strip_counts;
  std::uint64_t tumbles = 0;
};

/// Particles are processed in fixed chunks, each with its own stream split
/// from the seed, and merged as integers, so results do not depend on the
/// thread count.
EnsembleResult simulate_ensemble(const EnsembleConfig& config);

/// Hill estimator from the k largest samples.
double hill_tail_index(std::span<const double> samples, int k);

struct HillDiagnostic {
  std::vector<int> ks;
  std::vector<double> estimates;
  double relative_spread = 0.0; // (max - min) / median
  bool plateau = false;         // spread below the tolerance
};

/// Hill estimates over several k; a power-law tail gives a plateau, light
/// tails drift with k and are flagged.
HillDiagnostic hill_plateau(std::span<const double> samples,
                            std::span<const int> ks, double tolerance = 0.1);

/// Worker count from FRACKIX_THREADS (if set) capped by the hardware.
int worker_count(int requested = 0);

} // namespace frackix::mc
