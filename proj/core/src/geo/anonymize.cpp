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

#include "rmon/geo/anonymize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmon/common/digest.hpp"

namespace rmon::geo {
namespace {

double stream_uniform(Secret128 const& seed, std::uint8_t index) {
    std::string msg(seed.raw());
    msg += "rotation";
    msg.push_back(static_cast<char>(index));
    auto const digest = sha256(msg);
    std::uint64_t word = 0;
    for (int i = 0; i < 8; ++i) {
        word = (word << 8) | digest[i];
    }
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

Rotation multiply(Rotation const& a, Rotation const& b) noexcept {
    Rotation out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    return out;
}

Rotation rot_z(double t) noexcept {
    double const c = std::cos(t);
    double const s = std::sin(t);
    return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

}  // namespace

AnonymizationKey AnonymizationKey::identity() {
    return AnonymizationKey(Secret128{}, {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}});
}

EcefPoint AnonymizationKey::apply(EcefPoint const& c) const noexcept {
    auto const& r = rotation_;
    return {r[0][0] * c.x_m + r[0][1] * c.y_m + r[0][2] * c.z_m,
            r[1][0] * c.x_m + r[1][1] * c.y_m + r[1][2] * c.z_m,
            r[2][0] * c.x_m + r[2][1] * c.y_m + r[2][2] * c.z_m};
}

AnonymizationKey derive_key(Secret128 const& seed) {
    double const alpha = 2.0 * std::numbers::pi * stream_uniform(seed, 0);
    double const cos_beta = 2.0 * stream_uniform(seed, 1) - 1.0;
    double const sin_beta = std::sqrt(std::max(0.0, 1.0 - cos_beta * cos_beta));
    double const gamma = 2.0 * std::numbers::pi * stream_uniform(seed, 2);
    Rotation const rot_y{{{cos_beta, 0.0, sin_beta}, {0.0, 1.0, 0.0}, {-sin_beta, 0.0, cos_beta}}};
    return AnonymizationKey(seed, multiply(multiply(rot_z(alpha), rot_y), rot_z(gamma)));
}

double rotation_angle(Rotation const& r) noexcept {
    double const c = (r[0][0] + r[1][1] + r[2][2] - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

Wgs84Point anonymize_point(Wgs84Point const& p, AnonymizationKey const& key) {
    return ecef_to_wgs84(key.apply(wgs84_to_ecef(p)));
}

double haversine_m(Wgs84Point const& a, Wgs84Point const& b) noexcept {
    constexpr double kDegToRad = std::numbers::pi / 180.0;
    double const phi1 = a.latitude_deg * kDegToRad;
    double const phi2 = b.latitude_deg * kDegToRad;
    double const dphi = phi2 - phi1;
    double const dlambda = (b.longitude_deg - a.longitude_deg) * kDegToRad;
    double const s = std::sin(dphi / 2.0);
    double const t = std::sin(dlambda / 2.0);
    double const h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    return 2.0 * kMeanEarthRadius * std::asin(std::min(1.0, std::sqrt(h)));
}

double travelled_distance(std::span<Wgs84Point const> trace) noexcept {
    double total = 0.0;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        total += haversine_m(trace[i - 1], trace[i]);
    }
    return total;
}

}  // namespace rmon::geo
