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

#include <cmath>

namespace rmon::geo {

/// WGS-84 ellipsoid constants.
inline constexpr double kSemiMajorAxis = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
inline constexpr double kSemiMinorAxis = kSemiMajorAxis * (1.0 - kFlattening);

/// Geodetic position. Latitude in [-90, 90], longitude in (-180, 180],
/// altitude is height above the ellipsoid in meters.
struct Wgs84Point {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double altitude_m = 0.0;

    [[nodiscard]] bool valid() const noexcept;
};

/// Earth-centered, earth-fixed Cartesian coordinates in meters.
struct EcefPoint {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;

    [[nodiscard]] double norm() const noexcept { return std::sqrt(x_m * x_m + y_m * y_m + z_m * z_m); }
};

/// Maps any finite longitude into (-180, 180].
[[nodiscard]] double normalize_longitude(double longitude_deg) noexcept;

/// Throws Error(InvalidArgument) for points outside the type invariants.
[[nodiscard]] EcefPoint wgs84_to_ecef(Wgs84Point const& p);

/// Inverse of wgs84_to_ecef by fixed-point iteration on latitude, converged
/// to |dphi| < 1e-12 rad. At the poles longitude is fixed to 0.
///
/// Throws Error(InvalidArgument) when |c| <= 1e5 m and
/// Error(NonConvergence) if 100 iterations do not converge.
[[nodiscard]] Wgs84Point ecef_to_wgs84(EcefPoint const& c);

[[nodiscard]] double chord_distance_m(EcefPoint const& a, EcefPoint const& b) noexcept;

/// Distance from a to b after both are mapped to ECEF.
[[nodiscard]] double ecef_distance_m(Wgs84Point const& a, Wgs84Point const& b);

}  // namespace rmon::geo
