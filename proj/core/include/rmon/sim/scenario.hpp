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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/common/time.hpp"
#include "rmon/geo/geodesy.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon::sim {

/// Half-open [from, to).
struct Interval {
    Instant from{};
    Instant to{};

    [[nodiscard]] bool contains(Instant t) const noexcept { return from <= t && t < to; }
};

enum class CrashMode { Idle, MidUpload };

[[nodiscard]] std::string_view to_string(CrashMode m) noexcept;

struct CrashSpec {
    Instant at{};
    CrashMode mode = CrashMode::Idle;
};

/// Diurnal battery: drains from 100% between charge_to_h and charge_from_h
/// (UTC hours), charges overnight. `constant` overrides the model.
struct BatteryModel {
    double drain_pct_per_h = 4.0;
    double charge_pct_per_h = 25.0;
    int charge_from_h = 22;
    int charge_to_h = 7;
    std::optional<double> constant;

    [[nodiscard]] double level(Instant t) const noexcept;
};

struct DeviceSpec {
    std::string name;
    std::string subject_label;
    geo::Wgs84Point home;
    Instant enroll_at{};
    std::optional<Instant> leave_at;
    std::vector<Interval> wifi_off;
    /// App not running: nothing is recorded or synced.
    std::vector<Interval> offline;
    std::vector<Instant> manual_sync;
    std::vector<CrashSpec> crashes;
    int random_crashes = 0;
    double mid_upload_fraction = 0.5;
    BatteryModel battery;
};

struct Scenario {
    std::uint64_t seed = 1;
    Instant start{};
    Duration duration{};
    Duration step{std::chrono::seconds{60}};
    Duration sync_interval{std::chrono::minutes{15}};
    /// Study creation document as sent to the admin API.
    nlohmann::json study;
    StudyConfig study_config;
    std::vector<std::string> app_catalog;
    std::vector<DeviceSpec> devices;

    [[nodiscard]] Instant end() const { return start + duration; }
};

/// Document layout (times are hours from "start"):
///   {"seed", "start", "duration_days", "step_s", "sync_interval_s", "study",
///    "app_catalog", "devices": [{"name", "subject_label", "count", "home",
///    "enroll_at_h", "leave_at_h", "wifi_off": [[from_h, to_h]], "offline",
///    "manual_sync_h", "crashes": [{"at_h", "mode"}], "random_crashes",
///    "mid_upload_fraction", "battery"}]}
/// Throws Error(ScenarioInvalid).
[[nodiscard]] Scenario parse_scenario(nlohmann::json const& doc);
[[nodiscard]] Scenario load_scenario(std::filesystem::path const& path);

/// Explicit crash list of every device plus `random_crashes` draws keyed by
/// seed, sorted by time.
[[nodiscard]] std::vector<std::vector<CrashSpec>> crash_schedule(Scenario const& scenario, std::uint64_t seed);

[[nodiscard]] Scenario without_crashes(Scenario scenario);

}  // namespace rmon::sim
