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
#include <cstdint>
#include <string>
#include <string_view>

namespace rmon {

using Sha256Digest = std::array<std::uint8_t, 32>;

[[nodiscard]] std::string md5_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] Sha256Digest sha256(std::string_view bytes);

/// Lowercase hex.
[[nodiscard]] std::string to_hex(std::string_view bytes);

/// Accepts upper and lower case. Returns false on odd length or non-hex input.
[[nodiscard]] bool from_hex(std::string_view hex, std::string& out);

[[nodiscard]] bool is_lower_hex(std::string_view text) noexcept;

}  // namespace rmon
