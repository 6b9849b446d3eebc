// Copyright 2026 The fopf Authors
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

namespace fopf {

// Purposes that draw from the seed stream. Each gets an independent
// sub-seed so that adding a consumer never perturbs the others.
enum class SeedPurpose : std::uint64_t {
    split = 1,
    generate = 2,
    shuffle = 3,
    test_points = 4,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based derivation: (seed, purpose, index) -> independent 64-bit seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedPurpose purpose,
                                           std::uint64_t index = 0) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    return splitmix64(h ^ index);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, SeedPurpose purpose, std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(seed, purpose, index));
}

} // namespace fopf
