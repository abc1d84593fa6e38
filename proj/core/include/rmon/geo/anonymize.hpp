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
#include <span>

#include "rmon/common/ids.hpp"
#include "rmon/geo/geodesy.hpp"

namespace rmon::geo {

using Rotation = std::array<std::array<double, 3>, 3>;

/// Per-device secret rigid transform. The rotation is a uniformly random
/// element of SO(3) derived deterministically from the seed, so the same seed
/// always reproduces the same rotation bit for bit.
class AnonymizationKey {
  public:
    [[nodiscard]] static AnonymizationKey identity();

    [[nodiscard]] Secret128 const& seed() const noexcept { return seed_; }
    [[nodiscard]] Rotation const& rotation() const noexcept { return rotation_; }

    [[nodiscard]] EcefPoint apply(EcefPoint const& c) const noexcept;

  private:
    friend AnonymizationKey derive_key(Secret128 const& seed);
    AnonymizationKey(Secret128 seed, Rotation rotation) : seed_(seed), rotation_(rotation) {}

    Secret128 seed_;
    Rotation rotation_;
};

/// rotation = Rz(alpha) * Ry(beta) * Rz(gamma) with alpha, gamma uniform on
/// [0, 2pi) and cos(beta) uniform on [-1, 1]. The three uniforms come from
/// SHA-256(seed || "rotation" || i), i = 0, 1, 2: the top 53 bits of each
/// digest's first 8 bytes (big-endian), scaled to [0, 1).
[[nodiscard]] AnonymizationKey derive_key(Secret128 const& seed);

/// Rotation angle in radians, acos((trace(R) - 1) / 2).
[[nodiscard]] double rotation_angle(Rotation const& r) noexcept;

/// WGS-84 -> ECEF -> rotate -> WGS-84. Rotation preserves chord distances
/// exactly but not the ellipsoid, so altitude drifts by up to ~21 km.
[[nodiscard]] Wgs84Point anonymize_point(Wgs84Point const& p, AnonymizationKey const& key);

inline constexpr double kMeanEarthRadius = 6371000.0;

/// Great-circle distance on a sphere of radius kMeanEarthRadius.
[[nodiscard]] double haversine_m(Wgs84Point const& a, Wgs84Point const& b) noexcept;

/// Sum of consecutive haversine legs; 0 for fewer than two points.
[[nodiscard]] double travelled_distance(std::span<Wgs84Point const> trace) noexcept;

}  // namespace rmon::geo
