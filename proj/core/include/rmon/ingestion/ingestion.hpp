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

#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "rmon/common/ids.hpp"
#include "rmon/common/time.hpp"
#include "rmon/datastore/datastore.hpp"
#include "rmon/enrollment/enrollment.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon {

/// Upload metadata header document.
struct BatchMetadata {
    std::string study_id;
    std::string token_id;
    std::string device_id;
    Sensor sensor = Sensor::accelerometer;
    std::string batch_id;  // UUID v4 minted by the device
    Instant created_at{};
    std::string md5_hex;

    friend bool operator==(BatchMetadata const&, BatchMetadata const&) = default;
};

struct SensorBatch {
    BatchMetadata meta;
    std::string payload;  // exact transmitted bytes

    friend bool operator==(SensorBatch const&, SensorBatch const&) = default;
};

[[nodiscard]] nlohmann::json to_json(BatchMetadata const& meta);
/// Strict: all seven fields, nothing else. Throws Error(MalformedPayload).
[[nodiscard]] BatchMetadata metadata_from_json(nlohmann::json const& doc);

/// Wire framing of an upload: the compact metadata document, one '\n', then
/// the raw payload bytes up to the end of the body.
[[nodiscard]] std::string encode_upload(SensorBatch const& batch);
/// Throws Error(MalformedPayload).
[[nodiscard]] SensorBatch decode_upload(std::string_view body);

/// True iff MD5(payload) equals md5_hex, compared case-insensitively.
[[nodiscard]] bool verify_checksum(std::string_view payload, std::string_view md5_hex);

enum class BatchOutcome { Stored, Duplicate };

[[nodiscard]] std::string_view to_string(BatchOutcome o) noexcept;

struct BatchReceipt {
    std::string batch_id;
    Instant received_at{};
    BatchOutcome outcome = BatchOutcome::Stored;
    ObjectId object_ref;

    friend bool operator==(BatchReceipt const&, BatchReceipt const&) = default;
};

[[nodiscard]] nlohmann::json to_json(BatchReceipt const& receipt);
[[nodiscard]] BatchReceipt receipt_from_json(nlohmann::json const& doc);

/// "{token_id}/{sensor}/{created_at UTC date}/{batch_id}"
[[nodiscard]] std::string logical_path(BatchMetadata const& meta);

/// Per (token, sensor) tally of STORED receipts.
struct SensorCounts {
    int n_batches = 0;
    std::optional<Instant> last_received;
    /// Stored batches keyed by the UTC day of their created_at.
    std::map<Day, int> per_day;
};

using CountsKey = std::pair<std::string, Sensor>;  // (token_id, sensor)
using StudyCounts = std::map<CountsKey, SensorCounts>;

/// Late uploads are accepted for this long after a leave, for batches created
/// before the leave.
inline constexpr Duration kLeaveGrace = std::chrono::hours{24};

/// Checksum gate and idempotent hand-off to the datastore. Safe under
/// arbitrary concurrency; for a given (device_id, batch_id) exactly one
/// submission ever returns STORED.
class Ingestion {
  public:
    Ingestion(StudyRegistry const& registry, EnrollmentBook const& enrollment, Datastore& store, Clock const& clock)
        : registry_(registry), enrollment_(enrollment), store_(store), clock_(clock) {}

    /// Throws MalformedPayload, UnknownStudy, UnknownRegistration, AuthFailure,
    /// EmptyPayload, ChecksumMismatch, StudyClosed, AlreadyLeft (outside the
    /// leave grace window), SensorNotInStudy.
    BatchReceipt submit_batch(SensorBatch const& batch, Secret128 const& auth_secret);

    /// Throws UnknownStudy.
    [[nodiscard]] StudyCounts batch_counts(std::string_view study_id) const;

    /// STORED receipts issued so far for a study.
    [[nodiscard]] std::size_t stored_count(std::string_view study_id) const;

  private:
    using IdempotencyKey = std::pair<std::string, std::string>;  // (device_id, batch_id)

    struct Slot {
        bool done = false;
        BatchReceipt receipt;
    };

    /// Returns a DUPLICATE receipt if `key` was stored, waiting out any
    /// submission of it still in flight; nullopt if the key is free.
    std::optional<BatchReceipt> await_slot(std::unique_lock<std::mutex>& lock, IdempotencyKey const& key);

    StudyRegistry const& registry_;
    EnrollmentBook const& enrollment_;
    Datastore& store_;
    Clock const& clock_;

    mutable std::mutex mutex_;
    std::condition_variable slot_done_;
    std::map<IdempotencyKey, Slot> slots_;
    std::map<std::string, StudyCounts, std::less<>> counts_;
    std::map<std::string, std::size_t, std::less<>> stored_;
};

}  // namespace rmon
