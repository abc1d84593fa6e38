// Copyright 2026 The rmon Authors
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
#include <initializer_list>
#include <random>
#include <string_view>

namespace rmon {

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
    return mix64(seed ^ mix64(value));
}

/// FNV-1a; stable across platforms, used to key random streams by name.
[[nodiscard]] constexpr std::uint64_t hash_name(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto const c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic random source. The engine is std::mt19937_64 (its output
/// sequence is fixed by the standard); the distributions are implemented
/// here because the std:: ones are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Independent stream for a (root, key...) tuple, e.g. (device seed,
    /// sensor, tick). Streams do not depend on how many draws other streams
    /// made.
    [[nodiscard]] static Rng stream(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t s = mix64(root);
        for (auto const k : keys) {
            s = hash_combine(s, k);
        }
        return Rng(s);
    }

    [[nodiscard]] std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    [[nodiscard]] double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    [[nodiscard]] double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller without caching the second variate, so every call consumes
    /// exactly two engine outputs.
    [[nodiscard]] double normal(double mean, double sd);

    /// Uniform integer in [0, n).
    [[nodiscard]] std::uint64_t below(std::uint64_t n);

    [[nodiscard]] bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace rmon
