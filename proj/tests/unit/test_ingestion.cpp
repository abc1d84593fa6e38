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

#include <set>
#include <thread>

#include "error_code.hpp"
#include "rmon/ingestion/ingestion.hpp"
#include "small_platform.hpp"

using namespace rmon;
using rmon::testing::error_of;
using rmon::testing::SmallPlatform;

TEST_SUITE("ingestion") {

TEST_CASE("checksum verification") {
    CHECK(verify_checksum("abc", "900150983cd24fb0d6963f7d28e17f72"));
    CHECK(verify_checksum("abc", "900150983CD24FB0D6963F7D28E17F72"));
    CHECK_FALSE(verify_checksum("abd", "900150983cd24fb0d6963f7d28e17f72"));
    CHECK_FALSE(verify_checksum("abc", "900150983cd24fb0"));
    CHECK(verify_checksum("", "d41d8cd98f00b204e9800998ecf8427e"));
}

TEST_CASE("upload framing round-trips") {
    SmallPlatform p;
    auto const d = p.enroll("A");
    auto const b = p.batch(d, Sensor::location, "line one\nline two\n");
    auto const wire = encode_upload(b);
    CHECK(decode_upload(wire) == b);
    CHECK(metadata_from_json(to_json(b.meta)) == b.meta);
    CHECK(error_of([] { (void)decode_upload("no newline"); }) == ErrorCode::MalformedPayload);
    auto doc = to_json(b.meta);
    doc["extra"] = 1;
    CHECK(error_of([&] { (void)metadata_from_json(doc); }) == ErrorCode::MalformedPayload);
    CHECK(logical_path(b.meta) == "A_1/location/2020-07-08/" + b.meta.batch_id);
}

TEST_CASE("stored then duplicate, one object") {
    SmallPlatform p;
    auto const d = p.enroll("A");
    auto const b = p.batch(d, Sensor::activity, R"({"x":1})");
    auto const first = p.submit(d, b);
    CHECK(first.outcome == BatchOutcome::Stored);
    CHECK(first.object_ref.hex == sha256_hex(b.payload));
    for (int i = 0; i < 9; ++i) {
        auto const again = p.submit(d, b);
        CHECK(again.outcome == BatchOutcome::Duplicate);
        CHECK(again.object_ref == first.object_ref);
    }
    auto& ds = p.platform().datastore();
    CHECK(ds.list_objects("PPD").size() == 1);
    CHECK(ds.manifest("PPD").size() == 1);
    auto const counts = p.platform().ingestion().batch_counts("PPD");
    CHECK(counts.at({"A_1", Sensor::activity}).n_batches == 1);
    CHECK(receipt_from_json(to_json(first)) == first);
}

TEST_CASE("rejections leave the store untouched") {
    SmallPlatform p;
    auto const d = p.enroll("A");
    auto& ds = p.platform().datastore();
    auto const before = ds.history("PPD").size();

    auto bad = p.batch(d, Sensor::location, "payload");
    bad.payload[0] = 'P';
    CHECK(error_of([&] { p.submit(d, bad); }) == ErrorCode::ChecksumMismatch);

    auto empty = p.batch(d, Sensor::location, "");
    CHECK(empty.meta.md5_hex == "d41d8cd98f00b204e9800998ecf8427e");
    CHECK(error_of([&] { p.submit(d, empty); }) == ErrorCode::EmptyPayload);

    auto const gyro = p.batch(d, Sensor::gyroscope, "g");
    CHECK(error_of([&] { p.submit(d, gyro); }) == ErrorCode::SensorNotInStudy);

    auto const ok = p.batch(d, Sensor::location, "fine");
    CHECK(error_of([&] { (void)p.platform().submit_batch(ok, Secret128::from_u64(1)); }) == ErrorCode::AuthFailure);

    auto other_device = ok;
    other_device.meta.device_id = "0000";
    CHECK(error_of([&] { p.submit(d, other_device); }) == ErrorCode::AuthFailure);

    auto unknown = ok;
    unknown.meta.token_id = "A_2";
    CHECK(error_of([&] { p.submit(d, unknown); }) == ErrorCode::UnknownRegistration);

    auto wrong_study = ok;
    wrong_study.meta.study_id = "NOPE";
    CHECK(error_of([&] { p.submit(d, wrong_study); }) == ErrorCode::UnknownStudy);

    CHECK(ds.history("PPD").size() == before);
    CHECK(ds.list_objects("PPD").empty());
}

TEST_CASE("late uploads within the leave grace") {
    SmallPlatform p;
    auto const d = p.enroll("A");
    auto const before_leave = p.batch(d, Sensor::location, "early", p.clock().now());
    p.clock().advance(std::chrono::hours{1});
    (void)p.platform().leave("PPD", "A_1", d.token.secret, LeftReason::UserLeft);
    p.clock().advance(std::chrono::hours{2});
    CHECK(p.submit(d, before_leave).outcome == BatchOutcome::Stored);
    auto const after_leave = p.batch(d, Sensor::location, "late", p.clock().now());
    CHECK(error_of([&] { p.submit(d, after_leave); }) == ErrorCode::AlreadyLeft);
    auto const too_late = p.batch(d, Sensor::location, "old", p.clock().now() - std::chrono::hours{2});
    p.clock().advance(std::chrono::hours{30});
    CHECK(error_of([&] { p.submit(d, too_late); }) == ErrorCode::AlreadyLeft);
}

TEST_CASE("counts per token and sensor") {
    SmallPlatform p;
    auto const d = p.enroll("A");
    for (int i = 0; i < 29; ++i) {
        p.clock().advance(std::chrono::minutes{5});
        (void)p.submit(d, p.batch(d, Sensor::activity, "a" + std::to_string(i)));
    }
    auto const last = p.clock().now();
    auto const c = p.platform().ingestion().batch_counts("PPD").at({"A_1", Sensor::activity});
    CHECK(c.n_batches == 29);
    CHECK(c.last_received == last);
    CHECK(p.platform().ingestion().stored_count("PPD") == 29);
    CHECK(error_of([&] { (void)p.platform().ingestion().batch_counts("X"); }) == ErrorCode::UnknownStudy);
}

TEST_CASE("concurrent duplicates store once") {
    SmallPlatform p;
    auto const d = p.enroll("A");
    std::vector<SensorBatch> batches;
    for (int i = 0; i < 50; ++i) batches.push_back(p.batch(d, Sensor::location, "b" + std::to_string(i)));
    std::atomic<int> stored{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (auto const& b : batches) {
                if (p.submit(d, b).outcome == BatchOutcome::Stored) ++stored;
            }
        });
    }
    for (auto& t : threads) t.join();
    CHECK(stored == 50);
    CHECK(p.platform().datastore().list_objects("PPD").size() == 50);
    CHECK(p.platform().datastore().fsck("PPD").clean());
}

}
