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

#include "rmon/registry/study_registry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "rmon/common/error.hpp"
#include "rmon/common/json_util.hpp"

namespace rmon {
namespace {

[[noreturn]] void invalid(std::string const& what) { throw Error(ErrorCode::InvalidConfig, what); }

std::string_view state_name(StudyState s) { return s == StudyState::Open ? "OPEN" : "CLOSED"; }

StudyState parse_state(std::string_view s) {
    if (s == "OPEN") return StudyState::Open;
    if (s == "CLOSED") return StudyState::Closed;
    throw Error(ErrorCode::MalformedPayload, "unknown study state '" + std::string(s) + "'");
}

Sensor require_sensor(std::string const& name) {
    auto const s = parse_sensor(name);
    if (!s) {
        invalid("sensor '" + name + "' is not in the catalog");
    }
    return *s;
}

void sort_sensors(std::vector<SensorSpec>& sensors) {
    std::sort(sensors.begin(), sensors.end(), [](SensorSpec const& a, SensorSpec const& b) {
        return static_cast<int>(a.sensor) < static_cast<int>(b.sensor);
    });
}

std::vector<SensorSpec> parse_sensors(nlohmann::json const& list, std::optional<double> imu_default) {
    if (!list.is_array()) {
        throw Error(ErrorCode::MalformedPayload, "field 'sensors' must be an array");
    }
    std::vector<SensorSpec> out;
    for (auto const& item : list) {
        SensorSpec spec;
        if (item.is_string()) {
            spec.sensor = require_sensor(item.get<std::string>());
            spec.frequency = is_imu(spec.sensor) && imu_default ? *imu_default : default_frequency(spec.sensor);
        } else {
            json_util::require_object(item, {"name", "frequency"});
            spec.sensor = require_sensor(json_util::get_string(item, "name"));
            if (item.contains("frequency")) {
                spec.frequency = json_util::get_number(item, "frequency");
            } else {
                spec.frequency =
                    is_imu(spec.sensor) && imu_default ? *imu_default : default_frequency(spec.sensor);
            }
        }
        out.push_back(spec);
    }
    sort_sensors(out);
    return out;
}

int to_int(nlohmann::json const& doc, std::string const& key) {
    auto const v = json_util::get_int(doc, key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        invalid(key + " out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

std::string_view sensor_name(Sensor s) noexcept {
    switch (s) {
        case Sensor::accelerometer: return "accelerometer";
        case Sensor::gyroscope: return "gyroscope";
        case Sensor::gravity_sensor: return "gravity_sensor";
        case Sensor::linear_acceleration: return "linear_acceleration";
        case Sensor::location: return "location";
        case Sensor::activity: return "activity";
        case Sensor::application_usage: return "application_usage";
    }
    return "unknown";
}

std::optional<Sensor> parse_sensor(std::string_view name) noexcept {
    for (auto const s : kSensorCatalog) {
        if (sensor_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

double default_frequency(Sensor s) noexcept {
    switch (s) {
        case Sensor::location: return kLocationCadenceS;
        case Sensor::activity: return kActivityCadenceS;
        case Sensor::application_usage: return kAppUsageCadenceS;
        default: return kDefaultImuHz;
    }
}

SensorSpec const* StudyConfig::find(Sensor s) const noexcept {
    for (auto const& spec : sensors) {
        if (spec.sensor == s) {
            return &spec;
        }
    }
    return nullptr;
}

bool is_valid_identifier(std::string_view text) noexcept {
    if (text.empty() || text.size() > 64 || text.front() == '.') {
        return false;
    }
    return std::all_of(text.begin(), text.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-' || c == '.';
    });
}

void validate(StudyConfig const& cfg) {
    if (!is_valid_identifier(cfg.study_id)) {
        invalid("study_id must be 1-64 characters of [A-Za-z0-9_.-]");
    }
    if (cfg.name.empty()) {
        invalid("name must not be empty");
    }
    if (cfg.duration_days < 1) {
        invalid("duration_days must be >= 1");
    }
    if (cfg.n_subjects < 1) {
        invalid("n_subjects must be > 0");
    }
    if (cfg.n_codes < 1) {
        invalid("n_codes must be >= 1");
    }
    if (cfg.sensors.empty()) {
        invalid("sensors must not be empty");
    }
    std::set<Sensor> seen;
    for (auto const& spec : cfg.sensors) {
        if (!seen.insert(spec.sensor).second) {
            invalid("sensor '" + std::string(sensor_name(spec.sensor)) + "' listed twice");
        }
        if (!std::isfinite(spec.frequency)) {
            invalid("frequency must be finite");
        }
        if (is_imu(spec.sensor)) {
            if (spec.frequency < kMinImuHz || spec.frequency > kMaxImuHz) {
                invalid("IMU frequency for '" + std::string(sensor_name(spec.sensor)) + "' must be in [1, 200] Hz");
            }
        } else if (spec.frequency < kMinCadenceS || spec.frequency > kMaxCadenceS) {
            invalid("cadence for '" + std::string(sensor_name(spec.sensor)) + "' must be in [60, 86400] s");
        }
    }
}

nlohmann::json to_json(StudyConfig const& cfg) {
    nlohmann::json sensors = nlohmann::json::array();
    for (auto const& spec : cfg.sensors) {
        sensors.push_back({{"name", sensor_name(spec.sensor)}, {"frequency", spec.frequency}});
    }
    return {{"study_id", cfg.study_id},
            {"name", cfg.name},
            {"description", cfg.description},
            {"duration_days", cfg.duration_days},
            {"n_subjects", cfg.n_subjects},
            {"n_codes", cfg.n_codes},
            {"sensors", sensors},
            {"created_at", format_instant(cfg.created_at)},
            {"state", state_name(cfg.state)}};
}

StudyConfig config_from_json(nlohmann::json const& doc) {
    json_util::require_object(
        doc, {"study_id", "name", "description", "duration_days", "n_subjects", "n_codes", "sensors", "created_at",
              "state"});
    StudyConfig cfg;
    cfg.study_id = json_util::get_string(doc, "study_id");
    cfg.name = json_util::get_string(doc, "name");
    cfg.description = json_util::get_string(doc, "description");
    cfg.duration_days = to_int(doc, "duration_days");
    cfg.n_subjects = to_int(doc, "n_subjects");
    cfg.n_codes = to_int(doc, "n_codes");
    cfg.sensors = parse_sensors(json_util::field(doc, "sensors"), std::nullopt);
    cfg.created_at = parse_instant(json_util::get_string(doc, "created_at"));
    cfg.state = parse_state(json_util::get_string(doc, "state"));
    return cfg;
}

StudyConfig create_request_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"study_id", "name", "description", "duration_days", "n_subjects", "n_codes",
                                    "sensors", "default_frequency_hz"});
    StudyConfig cfg;
    cfg.study_id = json_util::get_string(doc, "study_id");
    cfg.name = json_util::get_string(doc, "name");
    cfg.description = json_util::get_optional_string(doc, "description").value_or("");
    cfg.duration_days = to_int(doc, "duration_days");
    cfg.n_subjects = to_int(doc, "n_subjects");
    if (doc.contains("n_codes")) {
        cfg.n_codes = to_int(doc, "n_codes");
    }
    std::optional<double> imu_default;
    if (doc.contains("default_frequency_hz")) {
        imu_default = json_util::get_number(doc, "default_frequency_hz");
    }
    cfg.sensors = parse_sensors(json_util::field(doc, "sensors"), imu_default);
    return cfg;
}

StudyOverview compute_overview(StudyConfig const& cfg, std::vector<SubjectActivity> const& subjects, Instant now) {
    StudyOverview out;
    out.study_id = cfg.study_id;
    out.name = cfg.name;
    out.description = cfg.description;
    out.duration_days = cfg.duration_days;
    out.planned_subjects = cfg.n_subjects;
    out.state = cfg.state;
    for (auto const& spec : cfg.sensors) {
        out.sensors.push_back(spec.sensor);
    }
    std::set<std::string> labels;
    for (auto const& subject : subjects) {
        if (!labels.insert(subject.subject_label).second) {
            continue;
        }
        ++out.total_subjects;
        if (subject.registered_at.empty()) {
            continue;
        }
        ++out.enrolled_subjects;
        auto const first = *std::min_element(subject.registered_at.begin(), subject.registered_at.end());
        if (first <= now && now - first <= kNewSubjectWindow) {
            ++out.new_subjects;
        }
    }
    return out;
}

nlohmann::json to_json(StudyOverview const& o) {
    nlohmann::json sensors = nlohmann::json::array();
    for (auto const s : o.sensors) {
        sensors.push_back(sensor_name(s));
    }
    return {{"study_id", o.study_id},
            {"name", o.name},
            {"description", o.description},
            {"duration_days", o.duration_days},
            {"planned_subjects", o.planned_subjects},
            {"total_subjects", o.total_subjects},
            {"enrolled_subjects", o.enrolled_subjects},
            {"new_subjects", o.new_subjects},
            {"sensors", sensors},
            {"state", state_name(o.state)}};
}

StudyConfig StudyRegistry::create(StudyConfig cfg, Instant now) {
    sort_sensors(cfg.sensors);
    validate(cfg);
    cfg.created_at = now;
    cfg.state = StudyState::Open;
    std::unique_lock lock(mutex_);
    if (studies_.contains(cfg.study_id)) {
        throw Error(ErrorCode::DuplicateStudyId, "study '" + cfg.study_id + "' already exists");
    }
    studies_.emplace(cfg.study_id, cfg);
    return cfg;
}

StudyConfig StudyRegistry::get(std::string_view study_id) const {
    std::shared_lock lock(mutex_);
    auto const it = studies_.find(study_id);
    if (it == studies_.end()) {
        throw Error(ErrorCode::UnknownStudy, "no study '" + std::string(study_id) + "'");
    }
    return it->second;
}

bool StudyRegistry::exists(std::string_view study_id) const {
    std::shared_lock lock(mutex_);
    return studies_.find(study_id) != studies_.end();
}

std::vector<StudyConfig> StudyRegistry::list() const {
    std::shared_lock lock(mutex_);
    std::vector<StudyConfig> out;
    out.reserve(studies_.size());
    for (auto const& [id, cfg] : studies_) {
        out.push_back(cfg);
    }
    return out;
}

StudyConfig StudyRegistry::close(std::string_view study_id) {
    std::unique_lock lock(mutex_);
    auto const it = studies_.find(study_id);
    if (it == studies_.end()) {
        throw Error(ErrorCode::UnknownStudy, "no study '" + std::string(study_id) + "'");
    }
    if (it->second.state == StudyState::Closed) {
        throw Error(ErrorCode::AlreadyClosed, "study '" + std::string(study_id) + "' is already closed");
    }
    it->second.state = StudyState::Closed;
    return it->second;
}

}  // namespace rmon
