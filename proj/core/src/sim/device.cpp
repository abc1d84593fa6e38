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

#include "rmon/sim/device.hpp"

#include <algorithm>

#include "rmon/common/digest.hpp"
#include "rmon/common/error.hpp"
#include "rmon/common/ids.hpp"
#include "rmon/common/json_util.hpp"

namespace rmon::sim {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kImuCursor = "imu";
constexpr double kImuWindowS = 60.0;

json optional_text(std::optional<std::string> const& v) { return v ? json(*v) : json(nullptr); }

json optional_secret(std::optional<Secret128> const& v) { return v ? json(v->hex()) : json(nullptr); }

bool transient(ErrorCode code) {
    return code == ErrorCode::TransportFailure || code == ErrorCode::Internal || code == ErrorCode::StorageFailure;
}

json event(Instant t, std::string const& device, std::string_view kind) {
    return {{"t", format_instant(t)}, {"device", device}, {"event", kind}};
}

}  // namespace

json to_json(DeviceState const& s) {
    return {{"device_id", s.device_id},
            {"study_id", optional_text(s.study_id)},
            {"token_id", optional_text(s.token_id)},
            {"token_secret", optional_secret(s.token_secret)},
            {"anon_seed", optional_secret(s.anon_seed)},
            {"config", s.config ? to_json(*s.config) : json(nullptr)},
            {"cursors", s.cursors},
            {"left", s.left}};
}

DeviceState device_state_from_json(json const& doc) {
    json_util::require_object(doc, {"device_id", "study_id", "token_id", "token_secret", "anon_seed", "config",
                                    "cursors", "left"});
    DeviceState s;
    s.device_id = json_util::get_string(doc, "device_id");
    s.study_id = json_util::get_optional_string(doc, "study_id");
    s.token_id = json_util::get_optional_string(doc, "token_id");
    if (auto v = json_util::get_optional_string(doc, "token_secret")) s.token_secret = Secret128::from_hex(*v);
    if (auto v = json_util::get_optional_string(doc, "anon_seed")) s.anon_seed = Secret128::from_hex(*v);
    if (auto const& c = json_util::field(doc, "config"); !c.is_null()) s.config = config_from_json(c);
    auto const& cursors = json_util::field(doc, "cursors");
    if (!cursors.is_object()) throw Error(ErrorCode::MalformedPayload, "cursors must be an object");
    for (auto const& [k, v] : cursors.items()) {
        if (!v.is_number_integer()) throw Error(ErrorCode::MalformedPayload, "cursor must be an integer");
        s.cursors[k] = v.get<std::int64_t>();
    }
    auto const& left = json_util::field(doc, "left");
    if (!left.is_boolean()) throw Error(ErrorCode::MalformedPayload, "left must be a boolean");
    s.left = left.get<bool>();
    return s;
}

struct DeviceActor::Process {
    Process(DeviceState s, fs::path const& buffer_dir, std::uint64_t seed)
        : state(std::move(s)), buffer(buffer_dir), har(seed), motion(seed) {}

    DeviceState state;
    LocalBuffer buffer;
    std::optional<geo::AnonymizationKey> key;
    HarChain har;
    HarChain motion;
};

DeviceActor::DeviceActor(DeviceSpec spec, std::size_t index, std::uint64_t fleet_seed, fs::path dir,
                         std::vector<std::string> app_catalog)
    : spec_(std::move(spec)),
      index_(index),
      seed_(hash_combine(fleet_seed, index)),
      dir_(std::move(dir)),
      app_catalog_(std::move(app_catalog)) {
    std::sort(spec_.manual_sync.begin(), spec_.manual_sync.end());
    auto rng = Rng::stream(fleet_seed, {hash_name("device"), index});
    device_id_ = uuid_v4(rng);
    fs::create_directories(dir_);
}

DeviceActor::~DeviceActor() = default;
DeviceActor::DeviceActor(DeviceActor&&) noexcept = default;
DeviceActor& DeviceActor::operator=(DeviceActor&&) noexcept = default;

std::size_t DeviceActor::buffered() const { return LocalBuffer(dir_ / "buffer").size(); }

std::optional<DeviceState> DeviceActor::persisted_state() const {
    auto const text = read_file(dir_ / "state.json");
    if (!text) return std::nullopt;
    return device_state_from_json(json_util::parse(*text));
}

LocationProfile DeviceActor::location_profile(Secret128 const& anon_seed) const {
    LocationProfile p;
    p.home = spec_.home;
    p.key = geo::derive_key(anon_seed);
    p.seed = seed_;
    return p;
}

bool DeviceActor::offline(Instant t) const {
    return std::any_of(spec_.offline.begin(), spec_.offline.end(), [&](Interval const& iv) { return iv.contains(t); });
}

void DeviceActor::restart(Instant now, EventSink const& emit) {
    DeviceState state;
    bool const fresh = !fs::exists(dir_ / "state.json");
    if (fresh) {
        state.device_id = device_id_;
        write_file_atomic(dir_ / "state.json", to_json(state).dump());
    } else {
        state = *persisted_state();
    }
    proc_ = std::make_unique<Process>(std::move(state), dir_ / "buffer", seed_);
    if (proc_->state.anon_seed) proc_->key = geo::derive_key(*proc_->state.anon_seed);
    emit(event(now, spec_.name, fresh ? "boot" : "restart"));
}

void DeviceActor::crash(Instant now, EventSink const& emit) {
    proc_.reset();
    ++stats_.crashes;
    emit(event(now, spec_.name, "crash"));
}

void DeviceActor::step(Instant now, bool sync_tick, ApiClient& client, EventSink const& emit) {
    if (offline(now)) return;
    if (!proc_) restart(now, emit);
    auto& st = proc_->state;
    if (st.left) return;
    if (!st.token_id) {
        if (now < spec_.enroll_at || qr_payload_.empty()) return;
        enroll(now, client, emit);
        if (!proc_->state.token_id) return;
    }
    generate(now);
    if (spec_.leave_at && now >= *spec_.leave_at) {
        leave(now, client, emit);
        return;
    }
    bool manual = false;
    while (next_manual_ < spec_.manual_sync.size() && spec_.manual_sync[next_manual_] <= now) {
        manual = true;
        ++next_manual_;
    }
    if (!sync_tick && !manual) return;
    DeviceConditions const conditions{
        std::none_of(spec_.wifi_off.begin(), spec_.wifi_off.end(), [&](Interval const& iv) { return iv.contains(now); }),
        spec_.battery.level(now)};
    if (sync_decision(proc_->buffer.size(), conditions, manual) == SyncDecision::Sync) {
        sync(now, client, emit);
    }
}

void DeviceActor::enroll(Instant now, ApiClient& client, EventSink const& emit) {
    auto const payload = std::exchange(qr_payload_, std::string{});
    try {
        auto const token = parse_qr_payload(payload);
        auto const activation = client.enroll({payload, device_id_, false});
        auto& st = proc_->state;
        st.study_id = activation.registration.study_id;
        st.token_id = activation.registration.token_id();
        st.token_secret = token.secret;
        auto rng = Rng::stream(seed_, {hash_name("anon")});
        st.anon_seed = random_secret(rng);
        stats_.anon_seed_hex = st.anon_seed->hex();
        st.config = activation.config;
        for (auto const& s : activation.config.sensors) {
            if (is_imu(s.sensor)) {
                st.cursors[std::string(kImuCursor)] = tick_at_or_after(now, kImuWindowS);
            } else {
                st.cursors[std::string(sensor_name(s.sensor))] = tick_at_or_after(now, s.frequency);
            }
        }
        proc_->key = geo::derive_key(*st.anon_seed);
        write_file_atomic(dir_ / "state.json", to_json(st).dump());
        auto e = event(now, spec_.name, "enroll");
        e["token_id"] = *st.token_id;
        emit(std::move(e));
    } catch (Error const& err) {
        if (err.code() == ErrorCode::TransportFailure) qr_payload_ = payload;
        auto e = event(now, spec_.name, "enroll_failed");
        e["error_code"] = to_string(err.code());
        emit(std::move(e));
    }
}

void DeviceActor::buffer_batch(Sensor sensor, std::int64_t tick, std::size_t chunk, Instant created_at,
                               std::string payload) {
    auto const& st = proc_->state;
    auto rng = Rng::stream(seed_, {hash_name("batch"), static_cast<std::uint64_t>(sensor),
                                   static_cast<std::uint64_t>(tick), chunk});
    SensorBatch batch;
    batch.meta.study_id = *st.study_id;
    batch.meta.token_id = *st.token_id;
    batch.meta.device_id = device_id_;
    batch.meta.sensor = sensor;
    batch.meta.batch_id = uuid_v4(rng);
    batch.meta.created_at = created_at;
    batch.meta.md5_hex = md5_hex(payload);
    batch.payload = std::move(payload);
    proc_->buffer.put(batch);
    if (stats_.batch_ids.insert(batch.meta.batch_id).second) ++stats_.generated;
}

void DeviceActor::generate(Instant now) {
    auto& st = proc_->state;
    bool changed = false;
    LocationProfile profile;
    profile.home = spec_.home;
    profile.key = *proc_->key;
    profile.seed = seed_;

    std::vector<SensorSpec> imu;
    for (auto const& spec : st.config->sensors) {
        if (is_imu(spec.sensor)) {
            imu.push_back(spec);
            continue;
        }
        auto& cursor = st.cursors[std::string(sensor_name(spec.sensor))];
        double const cadence = spec.frequency;
        for (; tick_time(cursor, cadence) <= now; ++cursor) {
            changed = true;
            Instant const t = tick_time(cursor, cadence);
            if (offline(t)) continue;
            switch (spec.sensor) {
                case Sensor::location: {
                    auto const sample = observe_location(profile, cursor, cadence);
                    buffer_batch(spec.sensor, cursor, 0, t, encode_location_payload({&sample, 1}));
                    break;
                }
                case Sensor::activity: {
                    auto const e = activity_event(proc_->har, seed_, cursor, cadence);
                    buffer_batch(spec.sensor, cursor, 0, t, encode_activity_payload({&e, 1}));
                    break;
                }
                case Sensor::application_usage:
                    buffer_batch(spec.sensor, cursor, 0, t,
                                 encode_app_usage_payload(app_usage_snapshot(seed_, app_catalog_, t)));
                    break;
                default:
                    break;
            }
        }
    }

    if (!imu.empty()) {
        auto& window = st.cursors[std::string(kImuCursor)];
        for (; tick_time(window + 1, kImuWindowS) <= now; ++window) {
            changed = true;
            Instant const start = tick_time(window, kImuWindowS);
            if (offline(start)) continue;
            auto const motion = motion_of(proc_->motion.at(tick_at_or_after(start + Duration{1}, kActivityCadenceS) - 1));
            SensorSpec accel_spec{Sensor::accelerometer, kDefaultImuHz};
            if (auto const* s = st.config->find(Sensor::accelerometer)) accel_spec = *s;
            auto accel_rng = Rng::stream(seed_, {hash_name("imu"), static_cast<std::uint64_t>(Sensor::accelerometer),
                                                 static_cast<std::uint64_t>(window)});
            auto const accel = generate_imu(accel_spec, start, kImuWindow, motion, accel_rng);
            if (still_gate(accel) == Gate::Pause) continue;
            for (auto const& spec : imu) {
                std::vector<ImuSample> samples;
                if (spec.sensor == Sensor::accelerometer) {
                    samples = accel;
                } else {
                    auto rng = Rng::stream(seed_, {hash_name("imu"), static_cast<std::uint64_t>(spec.sensor),
                                                   static_cast<std::uint64_t>(window)});
                    samples = generate_imu(spec, start, kImuWindow, motion, rng);
                }
                std::size_t chunk = 0;
                for (std::size_t from = 0; from < samples.size(); from += kImuBatchMaxSamples, ++chunk) {
                    auto const n = std::min(kImuBatchMaxSamples, samples.size() - from);
                    std::span<ImuSample const> part(samples.data() + from, n);
                    Instant const closed = n == kImuBatchMaxSamples && from + n < samples.size()
                                               ? part.back().t + Duration{1}
                                               : start + kImuWindow;
                    buffer_batch(spec.sensor, window, chunk, closed, encode_imu_payload(spec.sensor, spec.frequency, part));
                }
            }
        }
    }
    if (changed) write_file_atomic(dir_ / "state.json", to_json(st).dump());
}

void DeviceActor::sync(Instant now, ApiClient& client, EventSink const& emit) {
    auto& st = proc_->state;
    for (auto const& entry : proc_->buffer.entries()) {
        SensorBatch batch;
        try {
            batch = proc_->buffer.load(entry);
        } catch (Error const&) {
            proc_->buffer.remove(entry);
            auto e = event(now, spec_.name, "buffer_damaged");
            e["entry"] = entry;
            emit(std::move(e));
            continue;
        }
        if (mid_upload_armed_) {
            mid_upload_armed_ = false;
            try {
                (void)client.upload(batch, *st.token_secret);
            } catch (Error const&) {
            }
            ++stats_.mid_upload_crashes;
            auto e = event(now, spec_.name, "crash_mid_upload");
            e["batch_id"] = batch.meta.batch_id;
            emit(std::move(e));
            proc_.reset();
            ++stats_.crashes;
            restart(now, emit);
            // The restarted app resumes the interrupted sync from its buffer.
            sync(now, client, emit);
            return;
        }
        try {
            auto const receipt = client.upload(batch, *st.token_secret);
            proc_->buffer.remove(entry);
            if (receipt.outcome == BatchOutcome::Stored) {
                ++stats_.stored;
            } else {
                ++stats_.duplicates;
            }
            auto e = event(now, spec_.name, "upload");
            e["batch_id"] = batch.meta.batch_id;
            e["sensor"] = sensor_name(batch.meta.sensor);
            e["outcome"] = to_string(receipt.outcome);
            emit(std::move(e));
        } catch (Error const& err) {
            auto e = event(now, spec_.name, transient(err.code()) ? "sync_failed" : "rejected");
            e["batch_id"] = batch.meta.batch_id;
            e["error_code"] = to_string(err.code());
            emit(std::move(e));
            if (transient(err.code())) return;
            proc_->buffer.remove(entry);
            ++stats_.rejected;
        }
    }
    try {
        for (auto const& m : client.poll(*st.study_id, *st.token_id, *st.token_secret)) {
            ++stats_.notifications;
            auto e = event(now, spec_.name, "notification");
            e["message_id"] = m.message_id;
            emit(std::move(e));
        }
    } catch (Error const& err) {
        auto e = event(now, spec_.name, "poll_failed");
        e["error_code"] = to_string(err.code());
        emit(std::move(e));
    }
}

void DeviceActor::leave(Instant now, ApiClient& client, EventSink const& emit) {
    sync(now, client, emit);
    if (!proc_) return;
    auto& st = proc_->state;
    try {
        (void)client.leave({*st.study_id, *st.token_id, LeftReason::UserLeft}, *st.token_secret);
        emit(event(now, spec_.name, "leave"));
    } catch (Error const& err) {
        if (transient(err.code())) return;
        auto e = event(now, spec_.name, "leave_failed");
        e["error_code"] = to_string(err.code());
        emit(std::move(e));
    }
    st.left = true;
    st.anon_seed.reset();
    proc_->key.reset();
    write_file_atomic(dir_ / "state.json", to_json(st).dump());
}

}  // namespace rmon::sim
