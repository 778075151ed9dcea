// Copyright 2026 The csapir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "csapir/field.hpp"

namespace csapir {

// Noise sources drawn from one session seed. Each role gets its own stream so
// that, e.g., query noise can be re-enumerated with storage noise held fixed.
enum class SeedRole : std::uint64_t {
  kMessages = 1,
  kStorageNoise = 2,
  kQueryNoise = 3,
  kCorruption = 4,
  kShareA = 5,
  kShareB = 6,
};

// splitmix64 finalizer applied to master + role * golden-ratio constant.
inline std::uint64_t derive_seed(std::uint64_t master, SeedRole role) {
  std::uint64_t z = master + static_cast<std::uint64_t>(role) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  FieldElement uniform(const Field& field) {
    std::uniform_int_distribution<std::uint64_t> dist(0, field.modulus() - 1);
    return field.from_residue(dist(engine_));
  }

  FieldElement uniform_nonzero(const Field& field) {
    std::uniform_int_distribution<std::uint64_t> dist(1, field.modulus() - 1);
    return field.from_residue(dist(engine_));
  }

  FieldVector uniform_vector(const Field& field, std::size_t n) {
    FieldVector v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(uniform(field));
    return v;
  }

  // Uniform integer in [lo, hi].
  std::uint64_t index(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace csapir
