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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "rmon/geo/anonymize.hpp"
#include "rmon/sim/generators.hpp"
#include "rmon/sim/local_buffer.hpp"
#include "rmon/sim/scenario.hpp"
#include "rmon/sim/transport.hpp"

namespace rmon::sim {

inline constexpr std::size_t kImuBatchMaxSamples = 5000;
inline constexpr Duration kImuWindow = std::chrono::seconds{60};

using EventSink = std::function<void(nlohmann::json)>;

/// Counters kept by the harness, outside the simulated process.
struct DeviceStats {
    std::size_t generated = 0;
    std::size_t stored = 0;
    std::size_t duplicates = 0;
    std::size_t rejected = 0;
    std::size_t crashes = 0;
    std::size_t mid_upload_crashes = 0;
    std::size_t notifications = 0;
    std::set<std::string> batch_ids;
    /// Anonymization seed minted at activation (hex).
    std::string anon_seed_hex;
};

/// Persisted device state (state.json). The anonymization seed lives only
/// here and in memory.
struct DeviceState {
    std::string device_id;
    std::optional<std::string> study_id;
    std::optional<std::string> token_id;
    std::optional<Secret128> token_secret;
    std::optional<Secret128> anon_seed;
    std::optional<StudyConfig> config;
    /// Next tick per sensor name; IMU sensors share the "imu" window cursor.
    std::map<std::string, std::int64_t> cursors;
    bool left = false;
};

[[nodiscard]] nlohmann::json to_json(DeviceState const& s);
[[nodiscard]] DeviceState device_state_from_json(nlohmann::json const& doc);

/// One simulated phone. `step` is called by the scheduler at every step
/// boundary; the in-memory process can be dropped with `crash` and rebuilt
/// from disk with `restart`.
class DeviceActor {
  public:
    DeviceActor(DeviceSpec spec, std::size_t index, std::uint64_t fleet_seed, std::filesystem::path dir,
                std::vector<std::string> app_catalog);
    ~DeviceActor();
    DeviceActor(DeviceActor&&) noexcept;
    DeviceActor& operator=(DeviceActor&&) noexcept;

    /// QR payload the participant scans.
    void hand_token(std::string qr_payload) { qr_payload_ = std::move(qr_payload); }

    void step(Instant now, bool sync_tick, ApiClient& client, EventSink const& emit);

    /// Drops in-memory state; the next step restarts from disk.
    void crash(Instant now, EventSink const& emit);
    /// The next upload is sent, its response dropped, then the process dies.
    void arm_mid_upload_crash() { mid_upload_armed_ = true; }

    [[nodiscard]] std::string const& name() const noexcept { return spec_.name; }
    [[nodiscard]] std::string const& device_id() const noexcept { return device_id_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] DeviceSpec const& spec() const noexcept { return spec_; }
    [[nodiscard]] DeviceStats const& stats() const noexcept { return stats_; }
    [[nodiscard]] std::filesystem::path const& dir() const noexcept { return dir_; }
    [[nodiscard]] std::size_t buffered() const;
    /// Reads state.json; empty before the first step.
    [[nodiscard]] std::optional<DeviceState> persisted_state() const;
    [[nodiscard]] LocationProfile location_profile(Secret128 const& anon_seed) const;

  private:
    struct Process;

    void restart(Instant now, EventSink const& emit);
    void enroll(Instant now, ApiClient& client, EventSink const& emit);
    void generate(Instant now);
    void sync(Instant now, ApiClient& client, EventSink const& emit);
    void leave(Instant now, ApiClient& client, EventSink const& emit);
    void buffer_batch(Sensor sensor, std::int64_t tick, std::size_t chunk, Instant created_at, std::string payload);
    [[nodiscard]] bool offline(Instant t) const;

    DeviceSpec spec_;
    std::size_t index_;
    std::uint64_t seed_;
    std::string device_id_;
    std::filesystem::path dir_;
    std::vector<std::string> app_catalog_;
    std::string qr_payload_;
    bool mid_upload_armed_ = false;
    std::size_t next_manual_ = 0;
    DeviceStats stats_;
    std::unique_ptr<Process> proc_;
};

}  // namespace rmon::sim
