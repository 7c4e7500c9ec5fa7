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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frackix/error.hpp"
#include "frackix/mc_simulator.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace frackix;
using namespace frackix::mc;
using kinetic::ChemicalField;
using kinetic::ModelParams;
using kinetic::TurnKernel;

namespace {

constexpr double kPi = std::numbers::pi;

EnsembleConfig interval_config(std::uint64_t particles, double horizon) {
  EnsembleConfig c;
  c.particles = particles;
  c.horizon = horizon;
  c.snapshot_times = {horizon};
  c.params = ModelParams::make(1.5, 1.0, 0.0, 1.0, 0.1);
  c.kernel = TurnKernel::uniform(1);
  c.geometry = DomainGeometry::interval(1.0);
  c.bins = 20;
  c.seed = 42;
  return c;
}

} // namespace

TEST_CASE("interval flights") {
  auto geom = DomainGeometry::interval(1.0);
  ParticleState s{{0.5, 0.0}, {1.0, 0.0}, 0.0};
  auto a = advect_and_reflect(s, 0.2, 1.0, geom);
  CHECK(a.position.x == doctest::Approx(0.7));
  CHECK(a.direction.x == 1.0);
  s.position = {0.9, 0.0};
  auto b = advect_and_reflect(s, 0.2, 1.0, geom);
  CHECK(b.position.x == doctest::Approx(0.9));
  CHECK(b.direction.x == -1.0);
  // Several reflections: 2.35 from 0.9 moving right ends at 0.75 moving left.
  auto c = advect_and_reflect(s, 2.35, 1.0, geom);
  CHECK(c.position.x == doctest::Approx(0.75));
  CHECK(c.direction.x == -1.0);
  CHECK_THROWS_AS(advect_and_reflect(s, 1e7, 1.0, geom), Error);
  CHECK_THROWS_AS(advect_and_reflect(s, -1.0, 1.0, geom), Error);
}

TEST_CASE("disc flights stay inside and keep their speed") {
  auto geom = DomainGeometry::disc(1.0);
  RandomStream rng(5);
  for (int i = 0; i < 100000; ++i) {
    double r = std::sqrt(rng.uniform()), a = 2 * kPi * rng.uniform();
    double b = 2 * kPi * rng.uniform();
    ParticleState s{{r * std::cos(a), r * std::sin(a)}, {std::cos(b), std::sin(b)}, 0.0};
    auto out = advect_and_reflect(s, 10.0 * rng.uniform(), 1.0, geom);
    CHECK_MESSAGE(norm(out.position) <= 1.0, "inside");
    CHECK_MESSAGE(std::fabs(norm(out.direction) - 1.0) <= 1e-12, "speed");
  }
  // Head-on: from the center straight to the wall and back.
  ParticleState s{{0.0, 0.0}, {1.0, 0.0}, 0.0};
  auto out = advect_and_reflect(s, 1.5, 1.0, geom);
  CHECK(out.position.x == doctest::Approx(0.5));
  CHECK(out.direction.x == doctest::Approx(-1.0));
}

TEST_CASE("run-time scale") {
  auto p = ModelParams::make(1.5, 2.0, 0.0, 1.0, 0.1);
  CHECK(run_scale(p, {1.0, 0.0}, {5.0, 0.0}) == 2.0);
  auto q = ModelParams::make(1.5, 1.0, 3.0, 1.0, 0.25);
  CHECK(run_scale(q, {1.0, 0.0}, {0.2, 0.0}) == doctest::Approx(1.3));
  CHECK(run_scale(q, {-1.0, 0.0}, {100.0, 0.0}) == 0.01);
}

TEST_CASE("tumbling toward the attractant lengthens runs") {
  auto p = ModelParams::make(1.5, 1.0, 0.5, 1.0, 0.1);
  auto field = ChemicalField::linear(0.0, {1.0, 0.0});
  auto geom = DomainGeometry::interval(1.0);
  auto keep = TurnKernel::cosine(1); // never reverses
  RandomStream rng(8);
  const int n = 100000;
  std::vector<double> up(n), down(n);
  for (int i = 0; i < n; ++i) {
    up[i] = tumble({{0.5, 0}, {1, 0}, 0}, field, p, keep, geom, rng).remaining_run;
    down[i] = tumble({{0.5, 0}, {-1, 0}, 0}, field, p, keep, geom, rng).remaining_run;
  }
  // Mann-Whitney U with the normal approximation.
  std::vector<std::pair<double, int>> all;
  for (double v : up) all.push_back({v, 0});
  for (double v : down) all.push_back({v, 1});
  std::sort(all.begin(), all.end());
  double rank_up = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].second == 0) rank_up += static_cast<double>(i + 1);
  const double U = rank_up - 0.5 * n * (n + 1.0);
  const double mean = 0.5 * n * double(n);
  const double sd = std::sqrt(double(n) * n * (2.0 * n + 1.0) / 12.0);
  const double z = (U - mean) / sd;
  boost::math::normal nd;
  CHECK(boost::math::cdf(complement(nd, z)) < 0.001);

  // Tumbling on the wall never leaves the domain pointing outward.
  for (int i = 0; i < 1000; ++i) {
    auto s = tumble({{0.0, 0}, {-1, 0}, 0}, field, p, TurnKernel::uniform(1), geom, rng);
    CHECK(s.direction.x == 1.0);
  }
}

TEST_CASE("ensemble conserves particles and is deterministic") {
  auto c = interval_config(10000, 0.5);
  c.snapshot_times = {0.0, 0.1, 0.25, 0.5};
  c.params = ModelParams::make(1.5, 1.0, 0.4, 1.0, 0.1);
  c.field = ChemicalField::cosine(0.5, 1.0);
  c.start_width = 0.2;
  auto a = simulate_ensemble(c);
  for (const auto& h : a.snapshots) CHECK(h.total() == 10000);
  c.threads = 1;
  auto b = simulate_ensemble(c);
  c.threads = 3;
  auto d = simulate_ensemble(c);
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    CHECK(a.snapshots[s].counts == b.snapshots[s].counts);
    CHECK(a.snapshots[s].counts == d.snapshots[s].counts);
  }
  CHECK(a.tumbles == d.tumbles);
  c.seed = 43;
  auto e = simulate_ensemble(c);
  CHECK(e.snapshots.back().counts != a.snapshots.back().counts);

  c.snapshot_times = {0.3, 0.2};
  CHECK_THROWS_AS(simulate_ensemble(c), Error);
}

TEST_CASE("disc ensemble") {
  EnsembleConfig c;
  c.particles = 5000;
  c.horizon = 0.5;
  c.snapshot_times = {0.25, 0.5};
  c.params = ModelParams::make(1.5, 1.0, 0.5, 1.0, 0.1);
  c.kernel = TurnKernel::von_mises(2, 1.0);
  c.geometry = DomainGeometry::disc(1.0);
  c.field = ChemicalField::gaussian(1.0, {0.3, 0.2}, 0.3);
  c.bins = 10;
  auto r = simulate_ensemble(c);
  for (const auto& h : r.snapshots) {
    CHECK(h.total() == 5000);
    auto d = h.density();
    double mass = 0.0;
    for (int i = 0; i < h.bins(); ++i) mass += d[i] * h.bin_volume(i);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  c.kernel = TurnKernel::uniform(1);
  CHECK_THROWS_AS(simulate_ensemble(c), Error);
}

TEST_CASE("without chemotaxis the interval equilibrates to uniform") {
  auto c = interval_config(100000, 5.0);
  c.start_width = 0.0;
  auto r = simulate_ensemble(c);
  const auto& h = r.snapshots.back();
  const double n = 100000.0, p = 1.0 / h.bins();
  const double sigma = std::sqrt(n * p * (1.0 - p));
  for (auto count : h.counts)
    CHECK(std::fabs(double(count) - n * p) <= 3.0 * sigma);
}

TEST_CASE("empirical density") {
  auto geom = DomainGeometry::interval(2.0);
  std::vector<Vec2> one(50, Vec2{0.3, 0.0});
  auto h = empirical_density(one, geom, 10);
  CHECK(h.counts[1] == 50);
  auto d = h.density();
  CHECK(d[1] * h.bin_width() == doctest::Approx(1.0));
  std::vector<Vec2> spread;
  for (int i = 0; i < 1000; ++i) spread.push_back({2.0 * (i + 0.5) / 1000, 0.0});
  auto u = empirical_density(spread, geom, 10).density();
  double mass = 0.0;
  for (double v : u) {
    CHECK(v == doctest::Approx(0.5));
    mass += v * 0.2;
  }
  CHECK(std::fabs(mass - 1.0) <= 1e-12);
  std::vector<Vec2> bad{{2.5, 0.0}};
  CHECK_THROWS_AS(empirical_density(bad, geom, 10), Error);
}

TEST_CASE("Hill tail index") {
  RandomStream rng(99);
  const int n = 1000000;
  std::vector<double> lomax(n), expo(n);
  for (int i = 0; i < n; ++i) {
    lomax[i] = kinetic::sample_run_time(rng, 1.5, 1.0);
    expo[i] = -std::log(rng.uniform_open_closed());
  }
  const double a = hill_tail_index(lomax, 10000);
  CHECK(a >= 1.4);
  CHECK(a <= 1.6);
  const int ks[] = {1000, 3000, 10000, 30000};
  auto good = hill_plateau(lomax, ks);
  auto light = hill_plateau(expo, ks);
  MESSAGE("exponential Hill estimates " << light.estimates[0] << " "
          << light.estimates[3]);
  CHECK(good.plateau);
  CHECK_FALSE(light.plateau);
  // On exponential data the estimate is about ln(n/k) + 1: it drifts with k.
  CHECK(light.estimates[0] > light.estimates[3]);
  CHECK_THROWS_AS(hill_tail_index(lomax, 0), Error);
  CHECK_THROWS_AS(hill_tail_index(lomax, n), Error);
}
