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

#include "rmon/qc/quality_control.hpp"

#include <algorithm>

#include "rmon/common/error.hpp"

namespace rmon::qc {
namespace {

constexpr Flag kAllFlags[] = {Flag::NoData48h,          Flag::SensorNotChosen,        Flag::LeftTooEarly,
                              Flag::DurationReachedNotLeft, Flag::DurationReachedLeft, Flag::MultipleActive};

SensorCounts const* find_counts(StudyCounts const& counts, std::string const& token_id, Sensor s) {
    auto const it = counts.find(CountsKey{token_id, s});
    return it == counts.end() ? nullptr : &it->second;
}

bool has_missing_day(Registration const& reg, StudyConfig const& cfg, StudyCounts const& counts, Instant end) {
    // Full days only: the registration day and the end day are partial.
    auto const first = utc_day(reg.date_registered) + std::chrono::days{1};
    auto const last = utc_day(end) - std::chrono::days{1};
    auto const token_id = reg.token_id();
    for (auto const& spec : cfg.sensors) {
        auto const* c = find_counts(counts, token_id, spec.sensor);
        for (auto day = first; day <= last; day += std::chrono::days{1}) {
            if (c == nullptr) {
                return true;
            }
            auto const it = c->per_day.find(day);
            if (it == c->per_day.end() || it->second == 0) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::string_view to_string(Flag f) noexcept {
    switch (f) {
        case Flag::NoData48h: return "NO_DATA_48H";
        case Flag::SensorNotChosen: return "SENSOR_NOT_CHOSEN";
        case Flag::LeftTooEarly: return "LEFT_TOO_EARLY";
        case Flag::DurationReachedNotLeft: return "DURATION_REACHED_NOT_LEFT";
        case Flag::DurationReachedLeft: return "DURATION_REACHED_LEFT";
        case Flag::MultipleActive: return "MULTIPLE_ACTIVE";
    }
    return "UNKNOWN";
}

std::string_view flag_color(Flag f) noexcept {
    switch (f) {
        case Flag::NoData48h: return "red";
        case Flag::SensorNotChosen: return "grey";
        case Flag::LeftTooEarly: return "orange";
        case Flag::DurationReachedNotLeft: return "yellow";
        case Flag::DurationReachedLeft: return "green";
        case Flag::MultipleActive: return "purple";
    }
    return "neutral";
}

int time_in_study(Instant start, Instant end) {
    if (end < start) {
        throw Error(ErrorCode::NegativeInterval,
                    "end " + format_instant(end) + " precedes start " + format_instant(start));
    }
    return static_cast<int>(std::chrono::floor<std::chrono::days>(end - start).count());
}

FlagResult compute_flags(Registration const& reg, StudyConfig const& cfg, StudyCounts const& counts,
                         std::span<Registration const> subject_registrations, Instant now) {
    FlagResult out;
    auto const end = reg.date_left.value_or(now);
    int const days = time_in_study(reg.date_registered, end);
    auto const token_id = reg.token_id();

    if (reg.active()) {
        Instant latest = reg.date_registered;
        for (auto const& spec : cfg.sensors) {
            auto const* c = find_counts(counts, token_id, spec.sensor);
            if (c != nullptr && c->last_received) {
                latest = std::max(latest, *c->last_received);
            }
        }
        if (now - latest > kNoDataThreshold) {
            out.flags.insert(Flag::NoData48h);
        }
        if (days >= cfg.duration_days) {
            out.flags.insert(Flag::DurationReachedNotLeft);
        }
        auto const active = std::count_if(subject_registrations.begin(), subject_registrations.end(),
                                          [&](Registration const& r) {
                                              return r.subject_label == reg.subject_label && r.active();
                                          });
        if (active >= 2) {
            out.flags.insert(Flag::MultipleActive);
        }
    } else {
        if (reg.left_reason == LeftReason::UserLeft && days < cfg.duration_days) {
            out.flags.insert(Flag::LeftTooEarly);
        }
        if (days >= cfg.duration_days) {
            out.flags.insert(Flag::DurationReachedLeft);
        }
    }

    if (auto const code = reg.leave_status_code()) {
        out.status_code = code;
    } else if (has_missing_day(reg, cfg, counts, end)) {
        out.status_code = 3;
    }
    return out;
}

std::vector<ParticipantStatus> study_table(StudyConfig const& cfg, std::vector<Registration> registrations,
                                           StudyCounts const& counts, Instant now) {
    std::sort(registrations.begin(), registrations.end(), [](Registration const& a, Registration const& b) {
        return std::tie(a.subject_label, a.ordinal) < std::tie(b.subject_label, b.ordinal);
    });
    std::vector<ParticipantStatus> rows;
    rows.reserve(registrations.size());
    for (auto const& reg : registrations) {
        std::vector<Registration> same_subject;
        for (auto const& other : registrations) {
            if (other.subject_label == reg.subject_label) {
                same_subject.push_back(other);
            }
        }
        auto const result = compute_flags(reg, cfg, counts, same_subject, now);
        ParticipantStatus row;
        row.subject_label = reg.subject_label;
        row.token_id = reg.token_id();
        row.device_id = reg.device_id;
        row.date_registered = reg.date_registered;
        row.date_left = reg.date_left;
        row.time_in_study_days = time_in_study(reg.date_registered, reg.date_left.value_or(now));
        row.status_code = result.status_code;
        row.flags = result.flags;
        for (auto const s : kSensorCatalog) {
            SensorCell cell;
            cell.sensor = s;
            cell.chosen = cfg.has(s);
            if (auto const* c = find_counts(counts, row.token_id, s)) {
                cell.n_batches = c->n_batches;
                cell.last_received = c->last_received;
            }
            row.cells.push_back(cell);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json to_json(ParticipantStatus const& row) {
    nlohmann::json flags = nlohmann::json::array();
    for (auto const f : row.flags) {
        flags.push_back(to_string(f));
    }
    nlohmann::json sensors = nlohmann::json::object();
    for (auto const& cell : row.cells) {
        nlohmann::json c = {{"chosen", cell.chosen}, {"n_batches", cell.n_batches}};
        c["last_received"] = cell.last_received ? nlohmann::json(format_instant(*cell.last_received)) : nlohmann::json(nullptr);
        c["flags"] = cell.chosen ? nlohmann::json::array() : nlohmann::json::array({to_string(Flag::SensorNotChosen)});
        sensors[std::string(sensor_name(cell.sensor))] = std::move(c);
    }
    nlohmann::json doc = {{"subject_label", row.subject_label},
                          {"token_id", row.token_id},
                          {"device_id", row.device_id},
                          {"date_registered", format_instant(row.date_registered)},
                          {"time_in_study_days", row.time_in_study_days},
                          {"flags", flags},
                          {"sensors", sensors}};
    doc["date_left"] = row.date_left ? nlohmann::json(format_instant(*row.date_left)) : nlohmann::json(nullptr);
    doc["status_code"] = row.status_code ? nlohmann::json(*row.status_code) : nlohmann::json(nullptr);
    return doc;
}

nlohmann::json table_to_json(std::string_view study_id, Instant now, std::vector<ParticipantStatus> const& rows) {
    nlohmann::json out_rows = nlohmann::json::array();
    for (auto const& row : rows) {
        out_rows.push_back(to_json(row));
    }
    nlohmann::json legend = nlohmann::json::object();
    for (auto const f : kAllFlags) {
        legend[std::string(to_string(f))] = flag_color(f);
    }
    return {{"study_id", study_id}, {"now", format_instant(now)}, {"rows", out_rows}, {"legend", legend},
            {"status_codes",
             {{"1", "USER_LEFT"}, {"2", "AUTO_DURATION"}, {"3", "MISSING_DATA"}}}};
}

}  // namespace rmon::qc
