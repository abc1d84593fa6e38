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

#include "rmon/geo/geodesy.hpp"

#include <algorithm>
#include <numbers>

#include "rmon/common/error.hpp"

namespace rmon::geo {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kLatitudeTolerance = 1e-12;
constexpr int kMaxIterations = 100;
constexpr double kMinNorm = 1e5;

double prime_vertical_radius(double sin_phi) noexcept {
    return kSemiMajorAxis / std::sqrt(1.0 - kEccentricitySq * sin_phi * sin_phi);
}

}  // namespace

bool Wgs84Point::valid() const noexcept {
    return std::isfinite(latitude_deg) && std::isfinite(longitude_deg) && std::isfinite(altitude_m) &&
           latitude_deg >= -90.0 && latitude_deg <= 90.0 && longitude_deg > -180.0 && longitude_deg <= 180.0;
}

double normalize_longitude(double longitude_deg) noexcept {
    double lon = std::fmod(longitude_deg, 360.0);
    if (lon <= -180.0) {
        lon += 360.0;
    } else if (lon > 180.0) {
        lon -= 360.0;
    }
    return lon;
}

EcefPoint wgs84_to_ecef(Wgs84Point const& p) {
    if (!p.valid()) {
        throw Error(ErrorCode::InvalidArgument, "WGS-84 point out of range");
    }
    double const phi = p.latitude_deg * kDegToRad;
    double const lambda = p.longitude_deg * kDegToRad;
    double const sin_phi = std::sin(phi);
    double const cos_phi = std::cos(phi);
    double const n = prime_vertical_radius(sin_phi);
    double const h = p.altitude_m;
    return {(n + h) * cos_phi * std::cos(lambda), (n + h) * cos_phi * std::sin(lambda),
            (n * (1.0 - kEccentricitySq) + h) * sin_phi};
}

Wgs84Point ecef_to_wgs84(EcefPoint const& c) {
    if (!(std::isfinite(c.x_m) && std::isfinite(c.y_m) && std::isfinite(c.z_m)) || c.norm() <= kMinNorm) {
        throw Error(ErrorCode::InvalidArgument, "ECEF point too close to the earth center");
    }
    double const p = std::hypot(c.x_m, c.y_m);
    double const lambda = p == 0.0 ? 0.0 : std::atan2(c.y_m, c.x_m);

    // phi = atan2(z + e^2 N(phi) sin(phi), p), a contraction with rate ~e^2
    double phi = std::atan2(c.z_m, p * (1.0 - kEccentricitySq));
    bool converged = false;
    for (int i = 0; i < kMaxIterations; ++i) {
        double const sin_phi = std::sin(phi);
        double const n = prime_vertical_radius(sin_phi);
        double const next = std::atan2(c.z_m + kEccentricitySq * n * sin_phi, p);
        double const delta = std::abs(next - phi);
        phi = next;
        if (delta < kLatitudeTolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw Error(ErrorCode::NonConvergence, "latitude iteration did not converge");
    }
    double const sin_phi = std::sin(phi);
    double const cos_phi = std::cos(phi);
    double const n = prime_vertical_radius(sin_phi);
    // Valid at every latitude including the poles.
    double const h = p * cos_phi + c.z_m * sin_phi - kSemiMajorAxis * kSemiMajorAxis / n;

    Wgs84Point out{phi * kRadToDeg, normalize_longitude(lambda * kRadToDeg), h};
    out.latitude_deg = std::clamp(out.latitude_deg, -90.0, 90.0);
    return out;
}

double chord_distance_m(EcefPoint const& a, EcefPoint const& b) noexcept {
    return std::sqrt((a.x_m - b.x_m) * (a.x_m - b.x_m) + (a.y_m - b.y_m) * (a.y_m - b.y_m) +
                     (a.z_m - b.z_m) * (a.z_m - b.z_m));
}

double ecef_distance_m(Wgs84Point const& a, Wgs84Point const& b) {
    return chord_distance_m(wgs84_to_ecef(a), wgs84_to_ecef(b));
}

}  // namespace rmon::geo
