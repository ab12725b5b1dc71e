// Copyright 2026 The ldpsurv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ldpsurv {

/// SplitMix64 finalizer. Used to derive child seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for the task addressed by `path` under `master`.
///
/// The derivation folds each path component through SplitMix64, so
/// (master, {a, b}) and (master, {b, a}) give unrelated streams. Seeds depend
/// only on the path, never on scheduling, which is what makes parallel runs
/// reproducible.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = splitmix64(master);
  for (std::uint64_t component : path) {
    state = splitmix64(state ^ splitmix64(component + 0x632be59bd9b4e019ULL));
  }
  return state;
}

/// Exclusively owned uniform stream.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// converts raw words to doubles by hand; std::uniform_real_distribution is
/// implementation-defined and would break cross-platform reproducibility.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in the open interval (0, 1).
  double open_uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_word() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ldpsurv
