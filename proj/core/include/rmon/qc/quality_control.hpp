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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/common/time.hpp"
#include "rmon/enrollment/enrollment.hpp"
#include "rmon/ingestion/ingestion.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon::qc {

enum class Flag {
    NoData48h,
    SensorNotChosen,
    LeftTooEarly,
    DurationReachedNotLeft,
    DurationReachedLeft,
    MultipleActive,
};

[[nodiscard]] std::string_view to_string(Flag f) noexcept;

/// Dashboard palette. The one place flags map to colors.
[[nodiscard]] std::string_view flag_color(Flag f) noexcept;

inline constexpr Duration kNoDataThreshold = std::chrono::hours{48};

/// Whole elapsed days, floor((end - start) / 24 h). Throws NegativeInterval
/// when end < start.
[[nodiscard]] int time_in_study(Instant start, Instant end);

struct SensorCell {
    Sensor sensor = Sensor::accelerometer;
    bool chosen = false;  // false renders as SENSOR_NOT_CHOSEN
    int n_batches = 0;
    std::optional<Instant> last_received;
};

struct FlagResult {
    std::set<Flag> flags;
    std::optional<int> status_code;
};

/// Row flags and status code for one registration.
///
/// - NO_DATA_48H: active and now minus the latest receipt over chosen
///   sensors (or date_registered without any) exceeds 48 h.
/// - LEFT_TOO_EARLY: left as USER_LEFT before duration_days.
/// - DURATION_REACHED_NOT_LEFT / _LEFT: time in study >= duration_days,
///   active / left.
/// - MULTIPLE_ACTIVE: active while another registration of the same subject
///   is active.
/// - status_code: 1 USER_LEFT, 2 AUTO_DURATION, else 3 if a chosen sensor has
///   a full UTC day inside the active interval without any batch.
///
/// `subject_registrations` are all registrations of reg's subject (reg
/// included).
[[nodiscard]] FlagResult compute_flags(Registration const& reg, StudyConfig const& cfg, StudyCounts const& counts,
                                       std::span<Registration const> subject_registrations, Instant now);

struct ParticipantStatus {
    std::string subject_label;
    std::string token_id;
    std::string device_id;
    Instant date_registered{};
    std::optional<Instant> date_left;
    int time_in_study_days = 0;
    std::optional<int> status_code;
    std::set<Flag> flags;
    std::vector<SensorCell> cells;  // catalog order
};

/// One row per registration, ordered by subject label then token ordinal.
[[nodiscard]] std::vector<ParticipantStatus> study_table(StudyConfig const& cfg,
                                                         std::vector<Registration> registrations,
                                                         StudyCounts const& counts, Instant now);

[[nodiscard]] nlohmann::json to_json(ParticipantStatus const& row);

/// {"study_id", "now", "rows": [...], "legend": {flag: color}}
[[nodiscard]] nlohmann::json table_to_json(std::string_view study_id, Instant now,
                                           std::vector<ParticipantStatus> const& rows);

}  // namespace rmon::qc
