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

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/common/time.hpp"

namespace rmon {

enum class Sensor {
    accelerometer,
    gyroscope,
    gravity_sensor,
    linear_acceleration,
    location,
    activity,
    application_usage,
};

/// Catalog order; also the column order of the QC table.
inline constexpr Sensor kSensorCatalog[] = {
    Sensor::accelerometer, Sensor::gyroscope,         Sensor::gravity_sensor, Sensor::linear_acceleration,
    Sensor::location,      Sensor::activity,          Sensor::application_usage,
};

[[nodiscard]] std::string_view sensor_name(Sensor s) noexcept;
[[nodiscard]] std::optional<Sensor> parse_sensor(std::string_view name) noexcept;

/// accelerometer, gyroscope, gravity_sensor and linear_acceleration sample in
/// Hz; the others run on a fixed cadence in seconds.
[[nodiscard]] constexpr bool is_imu(Sensor s) noexcept {
    return s == Sensor::accelerometer || s == Sensor::gyroscope || s == Sensor::gravity_sensor ||
           s == Sensor::linear_acceleration;
}

inline constexpr double kDefaultImuHz = 50.0;
inline constexpr double kMinImuHz = 1.0;
inline constexpr double kMaxImuHz = 200.0;
inline constexpr double kLocationCadenceS = 600.0;
inline constexpr double kActivityCadenceS = 300.0;
inline constexpr double kAppUsageCadenceS = 86400.0;
inline constexpr double kMinCadenceS = 60.0;
inline constexpr double kMaxCadenceS = 86400.0;

[[nodiscard]] double default_frequency(Sensor s) noexcept;

struct SensorSpec {
    Sensor sensor = Sensor::accelerometer;
    /// Hz for IMU sensors, cadence in seconds otherwise.
    double frequency = kDefaultImuHz;

    friend bool operator==(SensorSpec const&, SensorSpec const&) = default;
};

enum class StudyState { Open, Closed };

inline constexpr int kDefaultBackupCodes = 4;

struct StudyConfig {
    std::string study_id;
    std::string name;
    std::string description;
    int duration_days = 0;
    int n_subjects = 0;
    /// Sorted by catalog order, one entry per sensor.
    std::vector<SensorSpec> sensors;
    /// Tokens per subject (primary + backups).
    int n_codes = kDefaultBackupCodes;
    Instant created_at{};
    StudyState state = StudyState::Open;

    [[nodiscard]] SensorSpec const* find(Sensor s) const noexcept;
    [[nodiscard]] bool has(Sensor s) const noexcept { return find(s) != nullptr; }

    friend bool operator==(StudyConfig const&, StudyConfig const&) = default;
};

/// Identifiers that end up in paths and URLs: 1..64 of [A-Za-z0-9_.-],
/// not starting with '.'.
[[nodiscard]] bool is_valid_identifier(std::string_view text) noexcept;

/// Throws Error(InvalidConfig) naming the first violated invariant.
void validate(StudyConfig const& cfg);

/// Full config document, as served to devices and the dashboard.
[[nodiscard]] nlohmann::json to_json(StudyConfig const& cfg);
/// Parses a full config document (the inverse of to_json).
[[nodiscard]] StudyConfig config_from_json(nlohmann::json const& doc);

/// Parses a create-study request: study_id, name, description, duration_days,
/// n_subjects, sensors, and optionally n_codes and default_frequency_hz.
/// Sensors are names or {name, frequency} objects; a missing frequency takes
/// default_frequency_hz for IMU sensors and the fixed cadence otherwise.
/// Unknown fields are rejected with Error(MalformedPayload).
[[nodiscard]] StudyConfig create_request_from_json(nlohmann::json const& doc);

struct SubjectActivity {
    std::string subject_label;
    std::vector<Instant> registered_at;
};

inline constexpr auto kNewSubjectWindow = std::chrono::days{7};

struct StudyOverview {
    std::string study_id;
    std::string name;
    std::string description;
    int duration_days = 0;
    int planned_subjects = 0;
    int total_subjects = 0;
    int enrolled_subjects = 0;
    int new_subjects = 0;
    std::vector<Sensor> sensors;
    StudyState state = StudyState::Open;
};

/// total = distinct subject labels with tokens; enrolled = subjects with at
/// least one registration; new = subjects whose first registration lies in
/// the trailing seven days.
[[nodiscard]] StudyOverview compute_overview(StudyConfig const& cfg, std::vector<SubjectActivity> const& subjects,
                                             Instant now);

[[nodiscard]] nlohmann::json to_json(StudyOverview const& overview);

/// Study catalog. Reads are concurrent; create and close are serialized.
class StudyRegistry {
  public:
    /// Validates, stamps created_at and state OPEN. Throws DuplicateStudyId or
    /// InvalidConfig.
    StudyConfig create(StudyConfig cfg, Instant now);

    /// Throws UnknownStudy.
    [[nodiscard]] StudyConfig get(std::string_view study_id) const;
    [[nodiscard]] bool exists(std::string_view study_id) const;
    [[nodiscard]] std::vector<StudyConfig> list() const;

    /// OPEN -> CLOSED. Throws UnknownStudy or AlreadyClosed.
    StudyConfig close(std::string_view study_id);

  private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, StudyConfig, std::less<>> studies_;
};

}  // namespace rmon
