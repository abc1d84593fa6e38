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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/sim/device.hpp"
#include "rmon/sim/scenario.hpp"
#include "rmon/sim/transport.hpp"

namespace rmon::sim {

struct FleetOptions {
    std::filesystem::path workdir;
    std::uint64_t seed = 1;
    /// Upper bound on simulated seconds per wall second; 0 runs unthrottled.
    double speedup = 0.0;
    /// Server clock to drive when the server runs in-process; null otherwise.
    ManualClock* server_clock = nullptr;
    std::string admin_token;
    /// Receives each event-log line (NDJSON, no trailing newline).
    std::function<void(std::string const&)> log_line;
};

struct DeviceReport {
    std::string name;
    std::string device_id;
    std::string subject_label;
    std::uint64_t seed = 0;
    geo::Wgs84Point home;
    /// Hex of the anonymization seed minted at activation, if any.
    std::string anon_seed_hex;
    DeviceStats stats;
    std::size_t buffered_at_end = 0;
};

struct FleetResult {
    std::vector<DeviceReport> devices;
    std::size_t events = 0;
    /// SHA-256 over the event log lines.
    std::string log_digest;
    Instant end{};
    /// QC table fetched at the end of the run.
    nlohmann::json qc;
    double wall_seconds = 0.0;

    [[nodiscard]] std::size_t generated() const;
    [[nodiscard]] std::size_t stored() const;
    [[nodiscard]] std::size_t duplicates() const;
    [[nodiscard]] std::size_t buffered() const;
    [[nodiscard]] std::size_t crashes() const;
};

/// Creates the scenario's study and tokens through the admin API, then
/// steps every device on a shared logical clock. Devices are visited in
/// index order at each step, so the interleaving is fixed by the scenario
/// and seed. Throws Error(ScenarioInvalid) for a non-empty workdir.
FleetResult run_fleet(Scenario const& scenario, Transport& transport, FleetOptions const& options);

}  // namespace rmon::sim
