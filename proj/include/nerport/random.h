// Copyright 2026 The nerport Authors
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

// Portable seeded randomness. All sampling in the project goes through Rng so
// that a seed reproduces the same draws on every platform: the engine is
// std::mt19937_64 (fully specified by the standard) and bounded draws use
// rejection sampling on the raw 64-bit output rather than
// std::uniform_int_distribution, whose algorithm is implementation-defined.

#ifndef NERPORT_RANDOM_H_
#define NERPORT_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace nerport {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). Rejects raw draws below (2^64 - n) mod n and
  // returns the remainder of the first accepted draw. n must be positive.
  std::uint64_t Below(std::uint64_t n);

  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double Uniform01();

  // Fisher-Yates: for i = n-1 down to 1, swap element i with Below(i + 1).
  template <typename T>
  void Shuffle(std::vector<T>* items) {
    for (std::size_t i = items->size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(Below(i));
      std::swap((*items)[i - 1], (*items)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer applied to seed + stream * golden-ratio constant.
// Derives independent component seeds from one run seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nerport

#endif  // NERPORT_RANDOM_H_
