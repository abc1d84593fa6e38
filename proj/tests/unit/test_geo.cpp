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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rmon/common/error.hpp"
#include "rmon/common/random.hpp"
#include "rmon/geo/anonymize.hpp"
#include "rmon/geo/geodesy.hpp"

using namespace rmon;
using namespace rmon::geo;

namespace {

// Reference values from tests/oracles/geodesy_oracle.py.
constexpr double kEcef52_13_100[3] = {3834167.673053, 885187.355150, 5002882.146558};
constexpr Rotation kRotationSeed1 = {{{0.708961026010788, -0.20267662453765453, 0.6754971868659065},
                                      {0.061089492588716765, -0.9365668732036774, -0.34512398629005797},
                                      {0.7025968527491309, 0.2859452358118765, -0.6516079992015955}}};
constexpr double kAnon52_13_0[3] = {-2.837022635, -21.417347983, -13184.800387};

Wgs84Point random_point(Rng& rng, double max_alt = 1000.0) {
    double const lat = std::asin(rng.uniform(-1.0, 1.0)) * 180.0 / std::numbers::pi;
    return {lat, rng.uniform(-180.0, 180.0), rng.uniform(-max_alt, max_alt)};
}

}  // namespace

TEST_SUITE("geo") {

TEST_CASE("wgs84 to ecef matches the reference") {
    auto const c = wgs84_to_ecef({52.0, 13.0, 100.0});
    CHECK(c.x_m == doctest::Approx(kEcef52_13_100[0]).epsilon(1e-12));
    CHECK(c.y_m == doctest::Approx(kEcef52_13_100[1]).epsilon(1e-12));
    CHECK(c.z_m == doctest::Approx(kEcef52_13_100[2]).epsilon(1e-12));
    auto const eq = wgs84_to_ecef({0.0, 0.0, 0.0});
    CHECK(eq.x_m == doctest::Approx(kSemiMajorAxis));
    auto const pole = wgs84_to_ecef({90.0, 0.0, 0.0});
    CHECK(pole.z_m == doctest::Approx(kSemiMinorAxis));
}

TEST_CASE("invalid points are rejected") {
    CHECK_THROWS_AS((void)wgs84_to_ecef({91.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS((void)wgs84_to_ecef({0.0, 0.0, std::nan("")}), Error);
    CHECK_THROWS_AS((void)ecef_to_wgs84({10.0, 10.0, 10.0}), Error);
    CHECK(normalize_longitude(190.0) == doctest::Approx(-170.0));
    CHECK(normalize_longitude(-180.0) == doctest::Approx(180.0));
}

TEST_CASE("round trip stays below a micrometre") {
    Rng rng(42);
    for (int i = 0; i < 2000; ++i) {
        auto const p = random_point(rng, 10000.0);
        auto const c = wgs84_to_ecef(p);
        auto const back = ecef_to_wgs84(c);
        CHECK(chord_distance_m(c, wgs84_to_ecef(back)) < 1e-6);
    }
    auto const pole = ecef_to_wgs84({0.0, 0.0, kSemiMinorAxis + 10.0});
    CHECK(pole.latitude_deg == doctest::Approx(90.0));
    CHECK(pole.longitude_deg == 0.0);
    CHECK(pole.altitude_m == doctest::Approx(10.0));
}

TEST_CASE("key derivation is deterministic and matches the reference rotation") {
    auto const key = derive_key(Secret128::from_u64(1));
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            CHECK(key.rotation()[r][c] == doctest::Approx(kRotationSeed1[r][c]).epsilon(1e-12));
        }
    }
    CHECK(derive_key(Secret128::from_u64(1)).rotation() == key.rotation());
    CHECK_FALSE(derive_key(Secret128::from_u64(2)).rotation() == key.rotation());
}

TEST_CASE("rotations are orthonormal with det +1") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        auto const& m = derive_key(random_secret(rng)).rotation();
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double dot = 0;
                for (int k = 0; k < 3; ++k) dot += m[a][k] * m[b][k];
                CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
            }
        }
        double const det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        CHECK(det == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mean rotation angle of derived keys is the Haar mean") {
    // Haar mean: pi/2 + 2/pi rad = 126.476 degrees (tests/oracles/commit_oracle.py).
    Rng rng(2);
    double sum = 0;
    for (int i = 0; i < 1000; ++i) sum += rotation_angle(derive_key(random_secret(rng)).rotation());
    CHECK(sum / 1000.0 * 180.0 / std::numbers::pi == doctest::Approx(126.476).epsilon(5.0 / 126.476));
}

TEST_CASE("anonymized point matches the reference pipeline") {
    auto const p = anonymize_point({52.0, 13.0, 0.0}, derive_key(Secret128::from_u64(1)));
    CHECK(p.latitude_deg == doctest::Approx(kAnon52_13_0[0]).epsilon(1e-9));
    CHECK(p.longitude_deg == doctest::Approx(kAnon52_13_0[1]).epsilon(1e-9));
    CHECK(p.altitude_m == doctest::Approx(kAnon52_13_0[2]).epsilon(1e-6));
    auto const same = anonymize_point({52.0, 13.0, 0.0}, AnonymizationKey::identity());
    CHECK(same.latitude_deg == doctest::Approx(52.0));
    CHECK(same.longitude_deg == doctest::Approx(13.0));
}

TEST_CASE("haversine closed form") {
    CHECK(haversine_m({0, 0, 0}, {0, 1, 0}) == doctest::Approx(111194.926645).epsilon(1e-10));
    CHECK(haversine_m({10, 20, 0}, {10, 20, 0}) == 0.0);
    std::vector<Wgs84Point> trace = {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}};
    CHECK(travelled_distance(trace) == doctest::Approx(2 * 111194.926645));
    CHECK(travelled_distance(std::span<Wgs84Point const>(trace.data(), 1)) == 0.0);
}

TEST_CASE("anonymization preserves chords exactly and haversine within 1.5%") {
    Rng rng(7);
    for (int k = 0; k < 20; ++k) {
        auto const key = derive_key(random_secret(rng));
        std::vector<Wgs84Point> trace;
        auto p = random_point(rng);
        for (int i = 0; i < 50; ++i) {
            trace.push_back(p);
            p.latitude_deg = std::clamp(p.latitude_deg + rng.normal(0, 0.01), -89.9, 89.9);
            p.longitude_deg = normalize_longitude(p.longitude_deg + rng.normal(0, 0.01));
        }
        std::vector<Wgs84Point> anon;
        for (auto const& q : trace) anon.push_back(anonymize_point(q, key));
        for (std::size_t i = 1; i < trace.size(); ++i) {
            auto const d0 = ecef_distance_m(trace[i - 1], trace[i]);
            auto const d1 = ecef_distance_m(anon[i - 1], anon[i]);
            CHECK(std::abs(d1 - d0) <= 1e-9 * d0 + 1e-6);
        }
        auto const t0 = travelled_distance(trace);
        auto const t1 = travelled_distance(anon);
        CHECK(std::abs(t1 - t0) / t0 < 0.015);
    }
}

}
