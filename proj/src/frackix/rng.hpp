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

#include <cstdint>
#include <random>

namespace frackix {

/// SplitMix64 finalizer; used to derive well-separated sub-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Pseudo-random stream. The engine sequence is fixed by the standard and the
/// deviates below are built from raw bits, so output is platform independent.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed)
      : engine_(splitmix64(seed)), seed_(seed) {}

  /// Independent child stream for worker/chunk `index`.
  RandomStream split(std::uint64_t index) const {
    return RandomStream(splitmix64(seed_) ^ splitmix64(~index));
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  std::uint64_t bits() { return engine_(); }

private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

} // namespace frackix
