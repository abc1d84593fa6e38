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

#include <fstream>

#include "error_code.hpp"
#include "fig3e.hpp"
#include "fleet_harness.hpp"
#include "rmon/common/digest.hpp"
#include "rmon/sim/device.hpp"
#include "rmon/sim/local_buffer.hpp"
#include "rmon/sim/scenario.hpp"

using namespace rmon;
using namespace rmon::sim;
using namespace std::chrono_literals;
using rmon::testing::EmbeddedFleet;
using rmon::testing::error_of;
using rmon::testing::TempDir;

namespace {

nlohmann::json small_scenario() {
    return nlohmann::json::parse(R"({
      "seed": 7,
      "start": "2020-07-07T00:00:00Z",
      "duration_days": 1,
      "study": {"study_id": "IMU", "name": "IMU", "duration_days": 30, "n_subjects": 2,
                "sensors": [{"name": "accelerometer", "frequency": 10}, {"name": "linear_acceleration", "frequency": 10},
                            {"name": "activity", "frequency": 300}, {"name": "location", "frequency": 600}]},
      "devices": [{"name": "a", "count": 2, "random_crashes": 2}]
    })");
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("scenario parsing") {
    auto const s = parse_scenario(nlohmann::json::parse(rmon::testing::read_fixture("fleet_crash.json")));
    CHECK(s.seed == 20200707);
    CHECK(s.end() - s.start == std::chrono::days{14});
    CHECK(s.step == 60s);
    CHECK(s.sync_interval == 900s);
    REQUIRE(s.devices.size() == 10);
    CHECK(s.devices[0].name == "phone-000");
    CHECK(s.devices[0].subject_label == "PPD_000");
    CHECK(s.devices[7].subject_label == "PPD_silent");
    CHECK(s.devices[7].wifi_off.at(0).from == s.start + 264h);
    CHECK(s.devices[9].battery.drain_pct_per_h == 6.0);
    CHECK(s.study_config.find(Sensor::application_usage)->frequency == 3600.0);

    auto const schedule = crash_schedule(s, s.seed);
    REQUIRE(schedule.size() == 10);
    CHECK(schedule[9].size() == 5);
    CHECK(std::is_sorted(schedule[0].begin(), schedule[0].end(),
                         [](CrashSpec const& a, CrashSpec const& b) { return a.at < b.at; }));
    CHECK(std::any_of(schedule[9].begin(), schedule[9].end(), [&](CrashSpec const& c) {
        return c.at == s.start + 12h && c.mode == CrashMode::MidUpload;
    }));
    CHECK(crash_schedule(s, s.seed)[3].front().at == schedule[3].front().at);
    auto const calm = crash_schedule(without_crashes(s), s.seed);
    for (auto const& c : calm) CHECK(c.empty());
}

TEST_CASE("invalid scenarios") {
    auto mutate = [](auto&& fn) {
        auto doc = small_scenario();
        fn(doc);
        return error_of([&] { (void)parse_scenario(doc); });
    };
    CHECK(mutate([](auto& d) { d["bogus"] = 1; }) == ErrorCode::ScenarioInvalid);
    CHECK(mutate([](auto& d) { d.erase("start"); }) == ErrorCode::ScenarioInvalid);
    CHECK(mutate([](auto& d) { d["devices"][0]["subject_label"] = "x"; }) == ErrorCode::ScenarioInvalid);
    CHECK(mutate([](auto& d) { d["devices"][0]["crashes"] = {{{"at_h", 1}, {"mode", "meteor"}}}; }) ==
          ErrorCode::ScenarioInvalid);
    CHECK(mutate([](auto& d) { d["app_catalog"] = {"maps"}; }) == ErrorCode::ScenarioInvalid);
    CHECK(mutate([](auto& d) { d["study"]["sensors"] = {"barometer"}; }) == ErrorCode::ScenarioInvalid);
    CHECK(mutate([](auto& d) { d["devices"] = nlohmann::json::array(); }) == ErrorCode::ScenarioInvalid);
    CHECK(error_of([] { (void)load_scenario("/nonexistent/scenario.json"); }) == ErrorCode::ScenarioInvalid);
}

TEST_CASE("battery model") {
    BatteryModel b;
    auto const day = parse_instant("2020-07-07T00:00:00Z");
    CHECK(b.level(day + 7h) == doctest::Approx(100.0));
    CHECK(b.level(day + 12h) == doctest::Approx(80.0));
    for (int h = 0; h < 48; ++h) {
        CHECK(b.level(day + std::chrono::hours{h}) >= 0.0);
        CHECK(b.level(day + std::chrono::hours{h}) <= 100.0);
    }
    b.constant = 15.0;
    CHECK(b.level(day) == 15.0);
}

TEST_CASE("local buffer") {
    TempDir dir;
    LocalBuffer buf(dir / "buffer");
    SensorBatch b;
    b.meta = {"S", "T_1", "dev", Sensor::location, "7c9e6679-7425-40de-944b-e07fc1f90ae7",
              parse_instant("2020-07-07T00:10:00Z"), ""};
    b.payload = "payload";
    b.meta.md5_hex = md5_hex(b.payload);
    auto later = b;
    later.meta.batch_id = "0b2c7a1e-1111-4222-8333-944455556666";
    later.meta.created_at += 1h;
    buf.put(later);
    buf.put(b);
    buf.put(b);
    auto const entries = buf.entries();
    REQUIRE(entries.size() == 2);
    CHECK(buf.load(entries[0]) == b);
    CHECK(buf.load(entries[1]) == later);
    buf.remove(entries[0]);
    CHECK(buf.size() == 1);
    {
        std::ofstream(buf.dir() / entries[1], std::ios::trunc) << "garbage";
    }
    CHECK(error_of([&] { (void)buf.load(entries[1]); }) == ErrorCode::MalformedPayload);

    write_file_atomic(dir / "f.txt", "hello");
    CHECK(read_file(dir / "f.txt") == "hello");
    CHECK_FALSE(read_file(dir / "missing.txt"));
}

TEST_CASE("device state document round-trips") {
    DeviceState s;
    s.device_id = "dev";
    s.study_id = "S";
    s.token_id = "T_1";
    s.token_secret = Secret128::from_u64(4);
    s.anon_seed = Secret128::from_u64(5);
    s.cursors = {{"imu", 12}, {"location", 3}};
    auto const back = device_state_from_json(to_json(s));
    CHECK(back.device_id == "dev");
    CHECK(back.anon_seed == s.anon_seed);
    CHECK(back.cursors == s.cursors);
    CHECK_FALSE(back.left);
}

TEST_CASE("study config decides which sensors a device records") {
    auto const scenario = parse_scenario(small_scenario());
    EmbeddedFleet fleet(scenario);
    auto const result = fleet.run();
    CHECK(result.generated() > 0);
    CHECK(result.stored() + result.buffered() <= result.generated());
    auto const counts = fleet.platform().ingestion().batch_counts("IMU");
    std::set<Sensor> seen;
    for (auto const& [key, c] : counts) {
        if (c.n_batches > 0) seen.insert(key.second);
    }
    CHECK(seen.contains(Sensor::accelerometer));
    CHECK(seen.contains(Sensor::linear_acceleration));
    CHECK(seen.contains(Sensor::activity));
    CHECK(seen.contains(Sensor::location));
    CHECK_FALSE(seen.contains(Sensor::gyroscope));
    CHECK_FALSE(seen.contains(Sensor::gravity_sensor));
    CHECK_FALSE(seen.contains(Sensor::application_usage));
    CHECK(fleet.platform().datastore().fsck("IMU").clean());
    CHECK(result.qc.at("rows").size() == 2);
}

TEST_CASE("fleet runs are deterministic and crash-invariant") {
    auto doc = small_scenario();
    doc["study"]["sensors"] = {"activity", "location", {{"name", "application_usage"}, {"frequency", 3600}}};
    doc["duration_days"] = 2;
    doc["devices"] = {{{"name", "a"}, {"count", 3}, {"random_crashes", 6}, {"mid_upload_fraction", 0.5}}};
    auto const scenario = parse_scenario(doc);

    EmbeddedFleet first(scenario);
    auto const r1 = first.run();
    EmbeddedFleet second(scenario);
    auto const r2 = second.run();
    CHECK(r1.log_digest == r2.log_digest);
    CHECK(r1.events == r2.events);
    CHECK(first.object_ids() == second.object_ids());
    CHECK(r1.crashes() > 0);
    CHECK(r1.duplicates() > 0);

    EmbeddedFleet calm(without_crashes(scenario));
    auto const r3 = calm.run();
    CHECK(r3.crashes() == 0);
    CHECK(calm.object_ids() == first.object_ids());
    CHECK(r3.generated() == r1.generated());
}

TEST_CASE("a non-empty workdir is refused") {
    auto const scenario = parse_scenario(small_scenario());
    TempDir dir;
    std::ofstream(dir / "junk") << "x";
    ManualClock clock(scenario.start);
    Platform platform(PlatformOptions{dir / "server", "inproc://x", "t", 1}, clock);
    api::ApiService svc(platform);
    InProcessTransport transport(svc);
    FleetOptions options;
    options.workdir = dir.path();
    options.admin_token = "t";
    options.server_clock = &clock;
    CHECK(error_of([&] { (void)run_fleet(scenario, transport, options); }) == ErrorCode::ScenarioInvalid);
}

}
