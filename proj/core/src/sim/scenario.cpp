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

#include "rmon/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rmon/common/error.hpp"
#include "rmon/common/json_util.hpp"
#include "rmon/common/random.hpp"
#include "rmon/sim/generators.hpp"
#include "rmon/sim/local_buffer.hpp"

namespace rmon::sim {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(std::string const& detail) { throw Error(ErrorCode::ScenarioInvalid, detail); }

Duration hours(double h) { return Duration{std::llround(h * 3'600'000.0)}; }

double number(json const& doc, std::string const& key, double fallback) {
    return doc.contains(key) ? json_util::get_number(doc, key) : fallback;
}

Instant at_hours(Scenario const& s, json const& value, std::string const& what) {
    if (!value.is_number()) invalid(what + " must be a number of hours");
    auto const h = value.get<double>();
    if (!(h >= 0.0) || s.start + hours(h) > s.end()) invalid(what + " lies outside the scenario");
    return s.start + hours(h);
}

std::vector<Interval> intervals(Scenario const& s, json const& doc, std::string const& key) {
    std::vector<Interval> out;
    if (!doc.contains(key)) return out;
    auto const& list = doc.at(key);
    if (!list.is_array()) invalid(key + " must be a list of [from_h, to_h] pairs");
    for (auto const& pair : list) {
        if (!pair.is_array() || pair.size() != 2) invalid(key + " entries must be [from_h, to_h]");
        Interval iv{at_hours(s, pair[0], key), at_hours(s, pair[1], key)};
        if (iv.to <= iv.from) invalid(key + " interval is empty or inverted");
        out.push_back(iv);
    }
    return out;
}

BatteryModel parse_battery(json const& doc) {
    json_util::require_object(doc, {"drain_pct_per_h", "charge_pct_per_h", "charge_from_h", "charge_to_h", "constant"});
    BatteryModel b;
    b.drain_pct_per_h = number(doc, "drain_pct_per_h", b.drain_pct_per_h);
    b.charge_pct_per_h = number(doc, "charge_pct_per_h", b.charge_pct_per_h);
    b.charge_from_h = static_cast<int>(number(doc, "charge_from_h", b.charge_from_h));
    b.charge_to_h = static_cast<int>(number(doc, "charge_to_h", b.charge_to_h));
    if (doc.contains("constant")) b.constant = json_util::get_number(doc, "constant");
    if (b.drain_pct_per_h < 0 || b.charge_pct_per_h < 0 || b.charge_to_h < 0 || b.charge_from_h > 24 ||
        b.charge_to_h >= b.charge_from_h) {
        invalid("battery model is inconsistent");
    }
    if (b.constant && (*b.constant < 0 || *b.constant > 100)) invalid("battery constant must be within [0, 100]");
    return b;
}

geo::Wgs84Point default_home(std::uint64_t seed, std::size_t index) {
    auto rng = Rng::stream(seed, {hash_name("home"), index});
    return {52.52 + rng.uniform(-0.1, 0.1), 13.405 + rng.uniform(-0.15, 0.15), 40.0};
}

void parse_device(Scenario& s, json const& doc, std::size_t& ordinal) {
    json_util::require_object(doc, {"name", "subject_label", "count", "home", "enroll_at_h", "leave_at_h", "wifi_off",
                                    "offline", "manual_sync_h", "crashes", "random_crashes", "mid_upload_fraction",
                                    "battery"});
    auto const count = doc.contains("count") ? json_util::get_int(doc, "count") : 1;
    if (count < 1 || count > 10'000) invalid("device count must be within [1, 10000]");
    if (count > 1 && doc.contains("subject_label")) invalid("subject_label cannot be combined with count > 1");

    DeviceSpec base;
    base.enroll_at = doc.contains("enroll_at_h") ? at_hours(s, doc.at("enroll_at_h"), "enroll_at_h") : s.start;
    if (doc.contains("leave_at_h")) {
        base.leave_at = at_hours(s, doc.at("leave_at_h"), "leave_at_h");
        if (*base.leave_at <= base.enroll_at) invalid("leave_at_h must follow enroll_at_h");
    }
    base.wifi_off = intervals(s, doc, "wifi_off");
    base.offline = intervals(s, doc, "offline");
    if (doc.contains("manual_sync_h")) {
        auto const& list = doc.at("manual_sync_h");
        if (!list.is_array()) invalid("manual_sync_h must be a list");
        for (auto const& h : list) base.manual_sync.push_back(at_hours(s, h, "manual_sync_h"));
    }
    if (doc.contains("crashes")) {
        auto const& list = doc.at("crashes");
        if (!list.is_array()) invalid("crashes must be a list");
        for (auto const& c : list) {
            json_util::require_object(c, {"at_h", "mode"});
            CrashSpec spec;
            spec.at = at_hours(s, json_util::field(c, "at_h"), "crash at_h");
            auto const mode = c.contains("mode") ? json_util::get_string(c, "mode") : "idle";
            if (mode == "idle") {
                spec.mode = CrashMode::Idle;
            } else if (mode == "mid_upload") {
                spec.mode = CrashMode::MidUpload;
            } else {
                invalid("crash mode must be idle or mid_upload");
            }
            base.crashes.push_back(spec);
        }
    }
    if (doc.contains("random_crashes")) {
        base.random_crashes = static_cast<int>(json_util::get_int(doc, "random_crashes"));
        if (base.random_crashes < 0) invalid("random_crashes must be non-negative");
    }
    base.mid_upload_fraction = number(doc, "mid_upload_fraction", base.mid_upload_fraction);
    if (base.mid_upload_fraction < 0 || base.mid_upload_fraction > 1) invalid("mid_upload_fraction must be within [0, 1]");
    if (doc.contains("battery")) base.battery = parse_battery(doc.at("battery"));

    std::optional<geo::Wgs84Point> home;
    if (doc.contains("home")) {
        auto const& h = doc.at("home");
        json_util::require_object(h, {"latitude_deg", "longitude_deg", "altitude_m"});
        geo::Wgs84Point p{json_util::get_number(h, "latitude_deg"), json_util::get_number(h, "longitude_deg"),
                          number(h, "altitude_m", 0.0)};
        if (!p.valid()) invalid("home is not a valid WGS-84 point");
        home = p;
    }
    auto const name = doc.contains("name") ? json_util::get_string(doc, "name") : std::string("dev");

    for (std::int64_t i = 0; i < count; ++i, ++ordinal) {
        DeviceSpec d = base;
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "%03zu", ordinal);
        d.name = count == 1 && doc.contains("name") ? name : name + "-" + suffix;
        d.subject_label = doc.contains("subject_label") ? json_util::get_string(doc, "subject_label")
                                                         : s.study_config.study_id + "_" + suffix;
        d.home = home.value_or(default_home(s.seed, ordinal));
        s.devices.push_back(std::move(d));
    }
}

}  // namespace

std::string_view to_string(CrashMode m) noexcept { return m == CrashMode::Idle ? "idle" : "mid_upload"; }

double BatteryModel::level(Instant t) const noexcept {
    if (constant) return *constant;
    double const h = seconds_since_midnight(t) / 3600.0;
    double const day_end = std::max(0.0, 100.0 - drain_pct_per_h * (charge_from_h - charge_to_h));
    if (h >= charge_to_h && h < charge_from_h) {
        return std::max(0.0, 100.0 - drain_pct_per_h * (h - charge_to_h));
    }
    double const since = h >= charge_from_h ? h - charge_from_h : h + 24.0 - charge_from_h;
    return std::min(100.0, day_end + charge_pct_per_h * since);
}

Scenario parse_scenario(json const& doc) {
    try {
        json_util::require_object(doc, {"seed", "start", "duration_days", "step_s", "sync_interval_s", "study",
                                        "app_catalog", "devices"});
        Scenario s;
        if (doc.contains("seed")) {
            auto const& v = doc.at("seed");
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                invalid("seed must be a non-negative integer");
            }
            s.seed = v.get<std::uint64_t>();
        }
        s.start = parse_instant(json_util::get_string(doc, "start"));
        auto const days = json_util::get_number(doc, "duration_days");
        if (!(days > 0) || days > 3660) invalid("duration_days must be within (0, 3660]");
        s.duration = hours(days * 24.0);
        s.step = Duration{std::llround(number(doc, "step_s", 60.0) * 1000.0)};
        s.sync_interval = Duration{std::llround(number(doc, "sync_interval_s", 900.0) * 1000.0)};
        if (s.step < std::chrono::seconds{1}) invalid("step_s must be at least 1");
        if (s.sync_interval < s.step || s.sync_interval.count() % s.step.count() != 0) {
            invalid("sync_interval_s must be a positive multiple of step_s");
        }
        if (s.start.time_since_epoch().count() % s.step.count() != 0) invalid("start must be aligned to step_s");

        s.study = json_util::field(doc, "study");
        s.study_config = create_request_from_json(s.study);
        validate(s.study_config);
        for (auto const& spec : s.study_config.sensors) {
            if (!is_imu(spec.sensor) && std::fmod(spec.frequency * 1000.0, static_cast<double>(s.step.count())) != 0.0) {
                invalid(std::string(sensor_name(spec.sensor)) + " cadence must be a multiple of step_s");
            }
        }

        if (doc.contains("app_catalog")) {
            auto const& list = doc.at("app_catalog");
            if (!list.is_array()) invalid("app_catalog must be a list");
            for (auto const& app : list) {
                if (!app.is_string()) invalid("app_catalog entries must be strings");
                s.app_catalog.push_back(app.get<std::string>());
            }
            std::sort(s.app_catalog.begin(), s.app_catalog.end());
        } else {
            s.app_catalog = default_app_catalog();
        }
        if (std::find(s.app_catalog.begin(), s.app_catalog.end(), "phone_calls") == s.app_catalog.end() ||
            std::find(s.app_catalog.begin(), s.app_catalog.end(), "sms") == s.app_catalog.end()) {
            invalid("app_catalog must include phone_calls and sms");
        }

        auto const& devices = json_util::field(doc, "devices");
        if (!devices.is_array() || devices.empty()) invalid("devices must be a non-empty list");
        std::size_t ordinal = 0;
        for (auto const& d : devices) parse_device(s, d, ordinal);
        std::vector<std::string> labels;
        for (auto const& d : s.devices) labels.push_back(d.subject_label);
        std::sort(labels.begin(), labels.end());
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) invalid("subject labels must be unique");
        return s;
    } catch (Error const& e) {
        if (e.code() == ErrorCode::ScenarioInvalid) throw;
        throw Error(ErrorCode::ScenarioInvalid, e.detail());
    } catch (json::exception const& e) {
        throw Error(ErrorCode::ScenarioInvalid, e.what());
    }
}

Scenario load_scenario(std::filesystem::path const& path) {
    auto const text = read_file(path);
    if (!text) invalid("cannot read scenario " + path.string());
    auto doc = json::parse(*text, nullptr, false);
    if (doc.is_discarded()) invalid("scenario " + path.string() + " is not valid JSON");
    return parse_scenario(doc);
}

std::vector<std::vector<CrashSpec>> crash_schedule(Scenario const& scenario, std::uint64_t seed) {
    std::vector<std::vector<CrashSpec>> out;
    auto const span_ms = scenario.duration.count();
    for (std::size_t i = 0; i < scenario.devices.size(); ++i) {
        auto const& d = scenario.devices[i];
        auto list = d.crashes;
        auto rng = Rng::stream(seed, {hash_name("crashes"), i});
        for (int k = 0; k < d.random_crashes; ++k) {
            auto const offset = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span_ms)));
            auto const snapped = offset - offset % scenario.step.count();
            auto const mode = rng.bernoulli(d.mid_upload_fraction) ? CrashMode::MidUpload : CrashMode::Idle;
            list.push_back({scenario.start + Duration{snapped}, mode});
        }
        std::stable_sort(list.begin(), list.end(), [](CrashSpec const& a, CrashSpec const& b) { return a.at < b.at; });
        out.push_back(std::move(list));
    }
    return out;
}

Scenario without_crashes(Scenario scenario) {
    for (auto& d : scenario.devices) {
        d.crashes.clear();
        d.random_crashes = 0;
    }
    return scenario;
}

}  // namespace rmon::sim
