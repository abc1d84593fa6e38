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

#include "rmon/common/ids.hpp"

#include <openssl/rand.h>

#include "rmon/common/digest.hpp"
#include "rmon/common/error.hpp"

namespace rmon {

std::string Secret128::hex() const { return to_hex(raw()); }

Secret128 Secret128::from_hex(std::string_view hex) {
    std::string raw;
    if (hex.size() != 32 || !rmon::from_hex(hex, raw)) {
        throw Error(ErrorCode::InvalidArgument, "secret must be 32 hex digits");
    }
    Secret128 s;
    std::copy(raw.begin(), raw.end(), s.bytes.begin());
    return s;
}

Secret128 Secret128::from_u64(std::uint64_t low, std::uint64_t high) {
    Secret128 s;
    for (int i = 0; i < 8; ++i) {
        s.bytes[7 - i] = static_cast<std::uint8_t>(high >> (8 * i));
        s.bytes[15 - i] = static_cast<std::uint8_t>(low >> (8 * i));
    }
    return s;
}

bool secrets_equal(Secret128 const& a, Secret128 const& b) noexcept {
    std::uint8_t diff = 0;
    for (std::size_t i = 0; i < a.bytes.size(); ++i) {
        diff |= static_cast<std::uint8_t>(a.bytes[i] ^ b.bytes[i]);
    }
    return diff == 0;
}

Secret128 CryptoSecretSource::next() {
    Secret128 s;
    if (RAND_bytes(s.bytes.data(), static_cast<int>(s.bytes.size())) != 1) {
        throw Error(ErrorCode::Internal, "RAND_bytes failed");
    }
    return s;
}

Secret128 SeededSecretSource::next() { return random_secret(rng_); }

Secret128 random_secret(Rng& rng) {
    return Secret128::from_u64(rng.next(), rng.next());
}

std::string uuid_v4(Rng& rng) {
    auto s = random_secret(rng);
    s.bytes[6] = static_cast<std::uint8_t>((s.bytes[6] & 0x0f) | 0x40);
    s.bytes[8] = static_cast<std::uint8_t>((s.bytes[8] & 0x3f) | 0x80);
    auto const hex = s.hex();
    return hex.substr(0, 8) + '-' + hex.substr(8, 4) + '-' + hex.substr(12, 4) + '-' + hex.substr(16, 4) + '-' +
           hex.substr(20, 12);
}

bool is_uuid(std::string_view text) noexcept {
    if (text.size() != 36) {
        return false;
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
        char const c = text[i];
        if (i == 8 || i == 13 || i == 18 || i == 23) {
            if (c != '-') return false;
        } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'))) {
            return false;
        }
    }
    return true;
}

bool is_valid_device_id(std::string_view text) noexcept {
    if (text.empty() || text.size() > 64) {
        return false;
    }
    for (auto const c : text) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F') || c == '-')) {
            return false;
        }
    }
    return true;
}

}  // namespace rmon
