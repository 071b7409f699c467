/*
 * Copyright 2026 The RecipeForge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RECIPEFORGE_RANDOM_HPP_
#define RECIPEFORGE_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace recipeforge {

// splitmix64 finalizer. Used to derive independent sub-stream seeds from a run
// seed: DeriveSeed(seed, "purpose tag", index).
inline std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t index = 0) {
  return Mix64(Mix64(seed ^ Mix64(stream)) + index);
}

// Deterministic generator. The standard distributions are implementation
// defined, so sampling helpers here only use the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), bound > 0. Rejection sampling removes modulo bias.
  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = Next();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal via Box-Muller.
  double Normal() {
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = Below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stream tags keep sub-seeds for different purposes apart.
namespace streams {
inline constexpr std::uint64_t kSplit = 0x5350;
inline constexpr std::uint64_t kEqualize = 0x4551;
inline constexpr std::uint64_t kShuffle = 0x5348;
inline constexpr std::uint64_t kInit = 0x494e;
inline constexpr std::uint64_t kForest = 0x464f;
inline constexpr std::uint64_t kSynthetic = 0x5359;
inline constexpr std::uint64_t kCommittee = 0x434f;
inline constexpr std::uint64_t kBlock = 0x424c;
}  // namespace streams

}  // namespace recipeforge

#endif  // RECIPEFORGE_RANDOM_HPP_
