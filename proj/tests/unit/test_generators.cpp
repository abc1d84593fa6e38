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
#include <complex>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "error_code.hpp"
#include "rmon/sim/generators.hpp"

using namespace rmon;
using namespace rmon::sim;
using namespace std::chrono_literals;
using rmon::testing::error_of;

namespace {

Instant const kStart = parse_instant("2020-08-05T00:00:00Z");

/// Frequency (Hz) of the largest periodogram bin of z, excluding DC.
double dominant_frequency(std::vector<ImuSample> const& s, double hz) {
    std::size_t const n = s.size();
    double mean = 0;
    for (auto const& x : s) mean += x.z;
    mean /= static_cast<double>(n);
    double best = 0, best_f = 0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        std::complex<double> acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double const ang = -2.0 * std::numbers::pi * static_cast<double>(k * i) / static_cast<double>(n);
            acc += (s[i].z - mean) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        if (std::norm(acc) > best) {
            best = std::norm(acc);
            best_f = static_cast<double>(k) * hz / static_cast<double>(n);
        }
    }
    return best_f;
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("IMU sample counts, spacing and gravity") {
    Rng rng(1);
    auto const s = generate_imu({Sensor::accelerometer, 50.0}, kStart, 60s, Motion::Still, rng);
    REQUIRE(s.size() == 3000);
    CHECK(s[1].t - s[0].t == 20ms);
    double mean_z = 0;
    for (auto const& x : s) mean_z += x.z;
    CHECK(mean_z / 3000.0 == doctest::Approx(kGravity).epsilon(0.001));
    CHECK(generate_imu({Sensor::gyroscope, 1.0}, kStart, 60s, Motion::Still, rng).size() == 60);
    CHECK(error_of([&] { (void)generate_imu({Sensor::location, 600.0}, kStart, 60s, Motion::Still, rng); }) ==
          ErrorCode::InvalidSpec);
    CHECK(error_of([&] { (void)generate_imu({Sensor::gyroscope, 500.0}, kStart, 60s, Motion::Still, rng); }) ==
          ErrorCode::InvalidSpec);
}

TEST_CASE("walking has a 2 Hz dominant peak") {
    Rng rng(2);
    auto const s = generate_imu({Sensor::accelerometer, 50.0}, kStart, 20s, Motion::Walking, rng);
    CHECK(std::abs(dominant_frequency(s, 50.0) - kWalkFrequencyHz) <= 0.3);
}

TEST_CASE("still gate") {
    Rng rng(3);
    auto const still = generate_imu({Sensor::accelerometer, 50.0}, kStart, 60s, Motion::Still, rng);
    auto const walk = generate_imu({Sensor::accelerometer, 50.0}, kStart, 60s, Motion::Walking, rng);
    auto const handled = generate_imu({Sensor::accelerometer, 50.0}, kStart, 60s, Motion::Handled, rng);
    CHECK(still_gate(still) == Gate::Pause);
    CHECK(still_gate(walk) == Gate::Record);
    CHECK(still_gate(handled) == Gate::Record);
    std::vector<ImuSample> short_run(still.begin(), still.begin() + 10);
    CHECK(error_of([&] { (void)still_gate(short_run); }) == ErrorCode::InvalidArgument);
    // Only the trailing window counts.
    std::vector<ImuSample> mixed(walk.begin(), walk.begin() + 1000);
    for (std::size_t i = 1000; i < still.size(); ++i) mixed.push_back(still[i]);
    CHECK(still_gate(mixed) == Gate::Pause);
}

TEST_CASE("location accuracy median is 14 m") {
    CHECK(rayleigh_sigma() * std::sqrt(2.0 * std::log(2.0)) == doctest::Approx(kMedianAccuracyM));
    Rng rng(4);
    std::vector<double> draws;
    for (int i = 0; i < 10000; ++i) draws.push_back(draw_accuracy(rng));
    std::nth_element(draws.begin(), draws.begin() + 5000, draws.end());
    CHECK(std::abs(draws[5000] - 14.0) <= 0.5);
}

TEST_CASE("location cadence and anonymized trace geometry") {
    LocationProfile plain;
    plain.home = {52.52, 13.405, 40.0};
    plain.seed = 99;
    auto anon = plain;
    anon.key = geo::derive_key(Secret128::from_u64(12345));

    auto const a = generate_location(plain, kLocationCadenceS, kStart, kStart + 24h);
    auto const b = generate_location(anon, kLocationCadenceS, kStart, kStart + 24h);
    REQUIRE(a.size() == 144);
    REQUIRE(b.size() == 144);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].t - a[i - 1].t == 600s);
    CHECK(tick_time(tick_at_or_after(kStart + 1s, 600.0), 600.0) == kStart + 600s);

    std::vector<double> displacement;
    for (std::size_t i = 0; i < a.size(); ++i) {
        displacement.push_back(geo::haversine_m(a[i].point, b[i].point));
        CHECK(a[i].accuracy_m == b[i].accuracy_m);
    }
    std::nth_element(displacement.begin(), displacement.begin() + 72, displacement.end());
    CHECK(displacement[72] > 1.0e6);
    for (std::size_t i = 1; i < a.size(); ++i) {
        double const d0 = geo::haversine_m(a[i - 1].point, a[i].point);
        double const d1 = geo::haversine_m(b[i - 1].point, b[i].point);
        CHECK(std::abs(d1 - d0) <= 0.015 * d0 + 0.01);
    }
    CHECK(error_of([&] { (void)generate_location(plain, 30.0, kStart, kStart + 1h); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("true position is a bounded walk around home") {
    LocationProfile p;
    p.home = {52.52, 13.405, 40.0};
    p.seed = 5;
    double worst = 0;
    for (std::int64_t k = 0; k < 2000; ++k) worst = std::max(worst, geo::haversine_m(p.home, true_position(p, k)));
    CHECK(worst < 6 * 150.0 * 6.0 * std::sqrt(2.0));
    CHECK(geo::haversine_m(true_position(p, 10), true_position(p, 10)) == 0.0);
}

TEST_CASE("HAR cadence, labels and confidence") {
    auto const events = generate_har(7, kStart, kStart + 24h);
    REQUIRE(events.size() == 288);
    std::set<std::string> names;
    for (auto const a : kActivities) names.insert(std::string(activity_name(a)));
    CHECK(names == std::set<std::string>{"walking", "running", "still", "on_bicycle", "on_vehicle", "tilting"});
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0) CHECK(events[i].t - events[i - 1].t == 300s);
        CHECK(names.contains(std::string(activity_name(events[i].label))));
        CHECK(events[i].confidence >= 0);
        CHECK(events[i].confidence <= 100);
    }
    auto const doc = nlohmann::json::parse(encode_activity_payload(events));
    for (auto const& e : doc.at("samples")) CHECK(names.contains(e.at("label").get<std::string>()));
}

TEST_CASE("HAR transition matrix is stochastic and the long run is stationary") {
    auto const m = har_transition_matrix();
    // Stationary vector by power iteration on the matrix itself.
    std::array<double, 6> pi{1, 0, 0, 0, 0, 0};
    for (int it = 0; it < 500; ++it) {
        std::array<double, 6> next{};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) next[j] += pi[i] * m[i][j];
        pi = next;
    }
    for (int i = 0; i < 6; ++i) {
        double row = 0;
        for (int j = 0; j < 6; ++j) row += m[i][j];
        CHECK(row == doctest::Approx(1.0));
        CHECK(m[i][i] == doctest::Approx(kHarSelfTransition));
    }
    auto const events = generate_har(11, kStart, kStart + std::chrono::days{200});
    std::array<double, 6> freq{};
    for (auto const& e : events) freq[static_cast<int>(e.label)] += 1.0;
    double const n = static_cast<double>(events.size());
    double const lambda = kHarSelfTransition - (1.0 - kHarSelfTransition) / 5.0;
    for (int i = 0; i < 6; ++i) {
        double const sigma = std::sqrt(pi[i] * (1 - pi[i]) / n * (1 + lambda) / (1 - lambda));
        CHECK(std::abs(freq[i] / n - pi[i]) < 3 * sigma);
    }
}

TEST_CASE("app usage counters are monotone within a day and reset at midnight") {
    auto const catalog = default_app_catalog();
    auto const day = utc_day(kStart);
    auto const snaps = generate_app_usage(21, day, catalog, 3600.0);
    REQUIRE(snaps.size() == 24);
    CHECK(snaps.back().at == kStart + 24h);
    CHECK(snaps.back().day == day);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        std::int64_t total = 0;
        for (auto const& [app, s] : snaps[i].foreground_s) {
            total += s;
            if (i > 0) CHECK(s >= snaps[i - 1].foreground_s.at(app));
        }
        CHECK(static_cast<double>(total) <= to_seconds(snaps[i].at - Instant{day}));
    }
    auto const next = app_usage_snapshot(21, catalog, kStart + 24h + 1s);
    CHECK(next.day == day + std::chrono::days{1});
    std::int64_t total = 0;
    for (auto const& [app, s] : next.foreground_s) total += s;
    CHECK(total <= 1);
    CHECK(snaps.back().foreground_s.size() == catalog.size());
    CHECK(error_of([&] { (void)generate_app_usage(21, day, {"maps"}, 3600.0); }) == ErrorCode::InvalidSpec);
    CHECK(error_of([&] { (void)generate_app_usage(21, day, catalog, 10.0); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("app sessions do not overlap") {
    auto const sessions = app_sessions(3, utc_day(kStart), default_app_catalog());
    CHECK_FALSE(sessions.empty());
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        CHECK(sessions[i].start_s < sessions[i].end_s);
        CHECK(sessions[i].end_s <= 86400);
        if (i > 0) CHECK(sessions[i - 1].end_s <= sessions[i].start_s);
    }
}

TEST_CASE("sync decision") {
    CHECK(sync_decision(3, {true, 80.0}, false) == SyncDecision::Sync);
    CHECK(sync_decision(3, {false, 80.0}, false) == SyncDecision::Hold);
    CHECK(sync_decision(3, {true, 19.9}, false) == SyncDecision::Hold);
    CHECK(sync_decision(3, {true, 20.0}, false) == SyncDecision::Sync);
    CHECK(sync_decision(0, {true, 80.0}, false) == SyncDecision::Hold);
    CHECK(sync_decision(3, {false, 5.0}, true) == SyncDecision::Sync);
}

TEST_CASE("payloads are valid JSON and deterministic") {
    Rng r1(9), r2(9);
    auto const a = generate_imu({Sensor::gyroscope, 50.0}, kStart, 2s, Motion::Walking, r1);
    auto const b = generate_imu({Sensor::gyroscope, 50.0}, kStart, 2s, Motion::Walking, r2);
    CHECK(encode_imu_payload(Sensor::gyroscope, 50.0, a) == encode_imu_payload(Sensor::gyroscope, 50.0, b));
    auto const doc = nlohmann::json::parse(encode_imu_payload(Sensor::gyroscope, 50.0, a));
    CHECK(doc.at("samples").size() == 100);
    auto const usage = nlohmann::json::parse(
        encode_app_usage_payload(app_usage_snapshot(1, default_app_catalog(), kStart + 12h)));
    CHECK(usage.at("day") == "2020-08-05");
}

}
