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

#include "rmon/ingestion/ingestion.hpp"

#include <algorithm>
#include <cctype>

#include "rmon/common/digest.hpp"
#include "rmon/common/error.hpp"
#include "rmon/common/json_util.hpp"

namespace rmon {
namespace {

[[noreturn]] void malformed(std::string const& what) { throw Error(ErrorCode::MalformedPayload, what); }

void check_metadata(BatchMetadata const& meta) {
    if (!is_valid_identifier(meta.study_id)) malformed("bad study_id");
    std::string label;
    int ordinal = 0;
    if (!split_token_id(meta.token_id, label, ordinal)) malformed("bad token_id");
    if (!is_valid_device_id(meta.device_id)) malformed("bad device_id");
    if (!is_uuid(meta.batch_id)) malformed("batch_id must be a UUID");
    if (meta.md5_hex.size() != 32) malformed("md5_hex must be 32 hex digits");
    std::string ignored;
    if (!from_hex(meta.md5_hex, ignored)) malformed("md5_hex must be 32 hex digits");
}

}  // namespace

nlohmann::json to_json(BatchMetadata const& meta) {
    return {{"study_id", meta.study_id},     {"token_id", meta.token_id},
            {"device_id", meta.device_id},   {"sensor", sensor_name(meta.sensor)},
            {"batch_id", meta.batch_id},     {"created_at", format_instant(meta.created_at)},
            {"md5_hex", meta.md5_hex}};
}

BatchMetadata metadata_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"study_id", "token_id", "device_id", "sensor", "batch_id", "created_at", "md5_hex"});
    BatchMetadata meta;
    meta.study_id = json_util::get_string(doc, "study_id");
    meta.token_id = json_util::get_string(doc, "token_id");
    meta.device_id = json_util::get_string(doc, "device_id");
    auto const sensor = json_util::get_string(doc, "sensor");
    auto const parsed = parse_sensor(sensor);
    if (!parsed) {
        malformed("unknown sensor '" + sensor + "'");
    }
    meta.sensor = *parsed;
    meta.batch_id = json_util::get_string(doc, "batch_id");
    try {
        meta.created_at = parse_instant(json_util::get_string(doc, "created_at"));
    } catch (Error const& e) {
        malformed(e.detail());
    }
    meta.md5_hex = json_util::get_string(doc, "md5_hex");
    return meta;
}

std::string encode_upload(SensorBatch const& batch) {
    auto out = to_json(batch.meta).dump();
    out.push_back('\n');
    out += batch.payload;
    return out;
}

SensorBatch decode_upload(std::string_view body) {
    auto const nl = body.find('\n');
    if (nl == std::string_view::npos) {
        malformed("upload must start with a metadata line");
    }
    SensorBatch batch;
    batch.meta = metadata_from_json(json_util::parse(body.substr(0, nl)));
    batch.payload = std::string(body.substr(nl + 1));
    return batch;
}

bool verify_checksum(std::string_view payload, std::string_view md5_hex) {
    if (md5_hex.size() != 32) {
        return false;
    }
    auto const actual = rmon::md5_hex(payload);
    return std::equal(actual.begin(), actual.end(), md5_hex.begin(), [](char a, char b) {
        return a == std::tolower(static_cast<unsigned char>(b));
    });
}

std::string_view to_string(BatchOutcome o) noexcept { return o == BatchOutcome::Stored ? "STORED" : "DUPLICATE"; }

nlohmann::json to_json(BatchReceipt const& r) {
    return {{"batch_id", r.batch_id},
            {"received_at", format_instant(r.received_at)},
            {"outcome", to_string(r.outcome)},
            {"object_ref", r.object_ref.hex}};
}

BatchReceipt receipt_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"batch_id", "received_at", "outcome", "object_ref"});
    BatchReceipt r;
    r.batch_id = json_util::get_string(doc, "batch_id");
    r.received_at = parse_instant(json_util::get_string(doc, "received_at"));
    auto const outcome = json_util::get_string(doc, "outcome");
    if (outcome == "STORED") {
        r.outcome = BatchOutcome::Stored;
    } else if (outcome == "DUPLICATE") {
        r.outcome = BatchOutcome::Duplicate;
    } else {
        malformed("unknown outcome '" + outcome + "'");
    }
    r.object_ref = ObjectId{json_util::get_string(doc, "object_ref")};
    return r;
}

std::string logical_path(BatchMetadata const& meta) {
    return meta.token_id + "/" + std::string(sensor_name(meta.sensor)) + "/" + format_day(utc_day(meta.created_at)) +
           "/" + meta.batch_id;
}

std::optional<BatchReceipt> Ingestion::await_slot(std::unique_lock<std::mutex>& lock, IdempotencyKey const& key) {
    for (;;) {
        auto it = slots_.find(key);
        if (it == slots_.end()) {
            return std::nullopt;
        }
        if (it->second.done) {
            auto receipt = it->second.receipt;
            receipt.outcome = BatchOutcome::Duplicate;
            receipt.received_at = clock_.now();
            return receipt;
        }
        // In flight elsewhere: wait until it completes or is abandoned.
        slot_done_.wait(lock);
    }
}

BatchReceipt Ingestion::submit_batch(SensorBatch const& batch, Secret128 const& auth_secret) {
    auto const& meta = batch.meta;
    check_metadata(meta);
    auto const cfg = registry_.get(meta.study_id);
    auto const reg = enrollment_.authenticate(meta.study_id, meta.token_id, auth_secret);
    if (reg.device_id != meta.device_id) {
        throw Error(ErrorCode::AuthFailure, "device is not the one registered for '" + meta.token_id + "'");
    }
    if (batch.payload.empty()) {
        throw Error(ErrorCode::EmptyPayload, "batch payload must be non-empty");
    }
    if (!verify_checksum(batch.payload, meta.md5_hex)) {
        throw Error(ErrorCode::ChecksumMismatch, "payload does not match md5_hex " + meta.md5_hex);
    }

    IdempotencyKey const key{meta.device_id, meta.batch_id};
    {
        std::unique_lock lock(mutex_);
        if (auto previous = await_slot(lock, key)) {
            return *previous;
        }
    }

    auto const now = clock_.now();
    if (cfg.state == StudyState::Closed) {
        throw Error(ErrorCode::StudyClosed, "study '" + cfg.study_id + "' is closed");
    }
    if (!reg.active() && (meta.created_at > *reg.date_left || now > *reg.date_left + kLeaveGrace)) {
        throw Error(ErrorCode::AlreadyLeft, "registration '" + meta.token_id + "' has left the study");
    }
    if (!cfg.has(meta.sensor)) {
        throw Error(ErrorCode::SensorNotInStudy,
                    "sensor '" + std::string(sensor_name(meta.sensor)) + "' is not recorded by this study");
    }

    // Claim the key; a concurrent submitter of the same batch waits for us.
    {
        std::unique_lock lock(mutex_);
        if (auto previous = await_slot(lock, key)) {
            return *previous;
        }
        slots_.try_emplace(key);
    }

    BatchReceipt receipt;
    try {
        auto const oid = store_.put_object(meta.study_id, batch.payload);
        store_.commit_batch(meta.study_id, logical_path(meta), oid,
                            "batch " + meta.batch_id + " from " + meta.device_id, now);
        receipt = BatchReceipt{meta.batch_id, now, BatchOutcome::Stored, oid};
    } catch (...) {
        std::lock_guard lock(mutex_);
        slots_.erase(key);
        slot_done_.notify_all();
        throw;
    }

    std::lock_guard lock(mutex_);
    auto& slot = slots_[key];
    slot.done = true;
    slot.receipt = receipt;
    auto& counts = counts_[meta.study_id][CountsKey{meta.token_id, meta.sensor}];
    ++counts.n_batches;
    counts.last_received = counts.last_received ? std::max(*counts.last_received, now) : now;
    ++counts.per_day[utc_day(meta.created_at)];
    ++stored_[meta.study_id];
    slot_done_.notify_all();
    return receipt;
}

StudyCounts Ingestion::batch_counts(std::string_view study_id) const {
    if (!registry_.exists(study_id)) {
        throw Error(ErrorCode::UnknownStudy, "no study '" + std::string(study_id) + "'");
    }
    std::lock_guard lock(mutex_);
    auto const it = counts_.find(study_id);
    return it == counts_.end() ? StudyCounts{} : it->second;
}

std::size_t Ingestion::stored_count(std::string_view study_id) const {
    std::lock_guard lock(mutex_);
    auto const it = stored_.find(study_id);
    return it == stored_.end() ? 0 : it->second;
}

}  // namespace rmon
