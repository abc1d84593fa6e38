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

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "rmon/common/random.hpp"

namespace rmon {

/// 128-bit opaque secret (token secrets, anonymization seeds).
struct Secret128 {
    std::array<std::uint8_t, 16> bytes{};

    [[nodiscard]] std::string hex() const;
    [[nodiscard]] std::string_view raw() const noexcept {
        return {reinterpret_cast<char const*>(bytes.data()), bytes.size()};
    }
    /// Throws Error(InvalidArgument) unless `hex` is exactly 32 hex digits.
    [[nodiscard]] static Secret128 from_hex(std::string_view hex);
    /// Big-endian 128-bit integer with the given low 64 bits.
    [[nodiscard]] static Secret128 from_u64(std::uint64_t low, std::uint64_t high = 0);

    friend auto operator<=>(Secret128 const&, Secret128 const&) = default;
};

/// Constant-time comparison for authentication checks.
[[nodiscard]] bool secrets_equal(Secret128 const& a, Secret128 const& b) noexcept;

class SecretSource {
  public:
    virtual ~SecretSource() = default;
    [[nodiscard]] virtual Secret128 next() = 0;
};

/// OS-backed CSPRNG (OpenSSL RAND_bytes).
class CryptoSecretSource final : public SecretSource {
  public:
    [[nodiscard]] Secret128 next() override;
};

/// Reproducible secrets for tests and simulations.
class SeededSecretSource final : public SecretSource {
  public:
    explicit SeededSecretSource(std::uint64_t seed) : rng_(seed) {}
    [[nodiscard]] Secret128 next() override;

  private:
    Rng rng_;
};

[[nodiscard]] Secret128 random_secret(Rng& rng);

/// RFC 4122 version-4 UUID text built from 16 random bytes.
[[nodiscard]] std::string uuid_v4(Rng& rng);

[[nodiscard]] bool is_uuid(std::string_view text) noexcept;

/// Device identifiers are UUID-like: 1..64 characters of hex digits and '-'.
/// Strict RFC 4122 shape is not required (field data contains malformed ids).
[[nodiscard]] bool is_valid_device_id(std::string_view text) noexcept;

}  // namespace rmon
