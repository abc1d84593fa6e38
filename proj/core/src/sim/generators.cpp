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

#include "rmon/sim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "rmon/common/error.hpp"

namespace rmon::sim {

using geo::anonymize_point;
using geo::kMeanEarthRadius;
using geo::normalize_longitude;
using geo::Wgs84Point;
namespace {

constexpr std::uint64_t kTagWalk = hash_name("walk");
constexpr std::uint64_t kTagLocation = hash_name("location");
constexpr std::uint64_t kTagHarStart = hash_name("har/start");
constexpr std::uint64_t kTagHarStep = hash_name("har/step");
constexpr std::uint64_t kTagHarConfidence = hash_name("har/confidence");
constexpr std::uint64_t kTagApps = hash_name("apps");

/// Counter-based uniform on [0, 1).
double keyed_uniform(std::uint64_t seed, std::uint64_t tag, std::int64_t index, std::uint64_t lane) {
    auto h = hash_combine(hash_combine(hash_combine(mix64(seed), tag), static_cast<std::uint64_t>(index)), lane);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double keyed_normal(std::uint64_t seed, std::uint64_t tag, std::int64_t index, std::uint64_t lane) {
    double const u1 = 1.0 - keyed_uniform(seed, tag, index, 2 * lane);
    double const u2 = keyed_uniform(seed, tag, index, 2 * lane + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t cadence_ms(double cadence_s) { return std::llround(cadence_s * 1000.0); }

void require_cadence(double cadence_s) {
    if (!(cadence_s >= kMinCadenceS) || !(cadence_s <= kMaxCadenceS)) {
        throw Error(ErrorCode::InvalidSpec, "cadence must be within [60, 86400] s");
    }
}

Wgs84Point displace(Wgs84Point const& origin, double east_m, double north_m) {
    constexpr double kDeg = 180.0 / std::numbers::pi;
    double const lat = std::clamp(origin.latitude_deg + north_m / kMeanEarthRadius * kDeg, -89.9, 89.9);
    double const lon =
        origin.longitude_deg + east_m / (kMeanEarthRadius * std::cos(lat / kDeg)) * kDeg;
    return {lat, normalize_longitude(lon), origin.altitude_m};
}

double round_to(double v, double quantum) { return std::round(v / quantum) * quantum; }

}  // namespace

// ---------------------------------------------------------------- IMU

double ImuSample::magnitude() const noexcept { return std::sqrt(x * x + y * y + z * z); }

std::vector<ImuSample> generate_imu(SensorSpec const& spec, Instant start, Duration window, Motion motion,
                                    Rng& rng) {
    if (!is_imu(spec.sensor)) {
        throw Error(ErrorCode::InvalidSpec, std::string(sensor_name(spec.sensor)) + " is not an IMU sensor");
    }
    if (!(spec.frequency >= kMinImuHz) || !(spec.frequency <= kMaxImuHz)) {
        throw Error(ErrorCode::InvalidSpec, "IMU frequency must be within [1, 200] Hz");
    }
    auto const n = static_cast<std::size_t>(std::floor(to_seconds(window) * spec.frequency + 1e-9));
    std::vector<ImuSample> out;
    out.reserve(n);

    bool const gyro = spec.sensor == Sensor::gyroscope;
    double const base_z = (spec.sensor == Sensor::accelerometer || spec.sensor == Sensor::gravity_sensor) ? kGravity : 0.0;
    double noise = kRestNoiseSd;
    if (motion == Motion::Handled) noise = gyro ? 0.2 : 0.3;
    if (spec.sensor == Sensor::gravity_sensor) noise = motion == Motion::Still ? 0.005 : 0.05;
    double amplitude = 0.0;
    if (motion == Motion::Walking && spec.sensor != Sensor::gravity_sensor) {
        amplitude = gyro ? 0.5 : kWalkAmplitude;
    }

    for (std::size_t i = 0; i < n; ++i) {
        auto const offset = Duration{std::llround(static_cast<double>(i) * 1000.0 / spec.frequency)};
        Instant const t = start + offset;
        double const phase_t = static_cast<double>(t.time_since_epoch().count() % 1'000'000) / 1000.0;
        double const wave = amplitude * std::sin(2.0 * std::numbers::pi * kWalkFrequencyHz * phase_t);
        ImuSample s;
        s.t = t;
        s.x = rng.normal(0.0, noise) + 0.5 * wave;
        s.y = rng.normal(0.0, noise);
        s.z = base_z + rng.normal(0.0, noise) + wave;
        out.push_back(s);
    }
    return out;
}

Gate still_gate(std::span<ImuSample const> accel, double window_s) {
    if (accel.empty() || to_seconds(accel.back().t - accel.front().t) < 1.0 - 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "still detection needs at least 1 s of samples");
    }
    auto const cutoff = accel.back().t - Duration{std::llround(window_s * 1000.0)};
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (auto const& s : accel) {
        if (s.t <= cutoff) continue;
        double const m = s.magnitude();
        sum += m;
        sum_sq += m * m;
        ++n;
    }
    double const mean = sum / static_cast<double>(n);
    double const var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    return std::sqrt(var) < kStillThreshold ? Gate::Pause : Gate::Record;
}

// ----------------------------------------------------------- location

double rayleigh_sigma() noexcept { return kMedianAccuracyM / std::sqrt(std::log(4.0)); }

double draw_accuracy(Rng& rng) { return rayleigh_sigma() * std::sqrt(-2.0 * std::log(1.0 - rng.uniform())); }

std::int64_t tick_at_or_after(Instant t, double cadence_s) {
    auto const step = cadence_ms(cadence_s);
    auto const ms = t.time_since_epoch().count();
    auto q = ms / step;
    if (q * step < ms) ++q;
    return q;
}

Instant tick_time(std::int64_t tick, double cadence_s) { return Instant{Duration{tick * cadence_ms(cadence_s)}}; }

Wgs84Point true_position(LocationProfile const& profile, std::int64_t tick) {
    double east = 0.0;
    double north = 0.0;
    for (std::int64_t j = tick - profile.memory_ticks + 1; j <= tick; ++j) {
        east += profile.step_sd_m * keyed_normal(profile.seed, kTagWalk, j, 0);
        north += profile.step_sd_m * keyed_normal(profile.seed, kTagWalk, j, 1);
    }
    return displace(profile.home, east, north);
}

LocationSample observe_location(LocationProfile const& profile, std::int64_t tick, double cadence_s) {
    auto rng = Rng::stream(profile.seed, {kTagLocation, static_cast<std::uint64_t>(tick)});
    double const accuracy = draw_accuracy(rng);
    double const bearing = rng.uniform(0.0, 2.0 * std::numbers::pi);
    auto const observed =
        displace(true_position(profile, tick), accuracy * std::sin(bearing), accuracy * std::cos(bearing));
    return {tick_time(tick, cadence_s), anonymize_point(observed, profile.key), accuracy};
}

std::vector<LocationSample> generate_location(LocationProfile const& profile, double cadence_s, Instant from,
                                              Instant to) {
    require_cadence(cadence_s);
    std::vector<LocationSample> out;
    for (auto k = tick_at_or_after(from, cadence_s); tick_time(k, cadence_s) < to; ++k) {
        out.push_back(observe_location(profile, k, cadence_s));
    }
    return out;
}

// ---------------------------------------------------------------- HAR

std::string_view activity_name(Activity a) noexcept {
    switch (a) {
        case Activity::walking: return "walking";
        case Activity::running: return "running";
        case Activity::still: return "still";
        case Activity::on_bicycle: return "on_bicycle";
        case Activity::on_vehicle: return "on_vehicle";
        case Activity::tilting: return "tilting";
    }
    return "still";
}

TransitionMatrix har_transition_matrix() noexcept {
    TransitionMatrix m{};
    double const other = (1.0 - kHarSelfTransition) / 5.0;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            m[i][j] = i == j ? kHarSelfTransition : other;
        }
    }
    return m;
}

Motion motion_of(Activity a) noexcept {
    switch (a) {
        case Activity::walking:
        case Activity::running: return Motion::Walking;
        case Activity::still: return Motion::Still;
        default: return Motion::Handled;
    }
}

Activity HarChain::at(std::int64_t tick) {
    auto const block_start = tick - (((tick % kHarBlockTicks) + kHarBlockTicks) % kHarBlockTicks);
    if (!valid_ || tick_ < block_start || tick_ > tick) {
        auto const u = keyed_uniform(seed_, kTagHarStart, block_start, 0);
        label_ = kActivities[static_cast<std::size_t>(u * 6.0)];
        tick_ = block_start;
        valid_ = true;
    }
    while (tick_ < tick) {
        ++tick_;
        auto const u = keyed_uniform(seed_, kTagHarStep, tick_, 0);
        if (u >= kHarSelfTransition) {
            auto const pick = static_cast<std::size_t>((u - kHarSelfTransition) / (1.0 - kHarSelfTransition) * 5.0);
            auto const current = static_cast<std::size_t>(label_);
            label_ = kActivities[(current + 1 + std::min<std::size_t>(pick, 4)) % 6];
        }
    }
    return label_;
}

ActivityEvent activity_event(HarChain& chain, std::uint64_t seed, std::int64_t tick, double cadence_s) {
    auto rng = Rng::stream(seed, {kTagHarConfidence, static_cast<std::uint64_t>(tick)});
    double const c = std::clamp(std::round(rng.normal(kHarConfidenceMean, kHarConfidenceSd)), 0.0, 100.0);
    return {tick_time(tick, cadence_s), chain.at(tick), static_cast<int>(c)};
}

std::vector<ActivityEvent> generate_har(std::uint64_t seed, Instant from, Instant to, double cadence_s) {
    require_cadence(cadence_s);
    HarChain chain(seed);
    std::vector<ActivityEvent> out;
    for (auto k = tick_at_or_after(from, cadence_s); tick_time(k, cadence_s) < to; ++k) {
        out.push_back(activity_event(chain, seed, k, cadence_s));
    }
    return out;
}

// ---------------------------------------------------------- app usage

std::vector<std::string> default_app_catalog() {
    return {"browser", "camera", "email", "maps", "messenger", "music", "phone_calls", "sms"};
}

std::vector<UsageSession> app_sessions(std::uint64_t seed, Day day, std::vector<std::string> const& catalog) {
    std::vector<UsageSession> out;
    if (catalog.empty()) return out;
    auto rng = Rng::stream(seed, {kTagApps, static_cast<std::uint64_t>(day.time_since_epoch().count())});
    constexpr std::int64_t kDay = 86400;
    std::int64_t t = 0;
    for (;;) {
        bool const night = t < 7 * 3600;
        double const mean_gap = night ? 3600.0 : 900.0;
        auto const gap = std::max<std::int64_t>(1, std::llround(-mean_gap * std::log(1.0 - rng.uniform())));
        auto const start = t + gap;
        if (start >= kDay) break;
        auto const length = std::max<std::int64_t>(5, std::llround(-240.0 * std::log(1.0 - rng.uniform())));
        auto const end = std::min(kDay, start + length);
        out.push_back({catalog[rng.below(catalog.size())], start, end});
        t = end;
    }
    return out;
}

AppUsageSnapshot app_usage_snapshot(std::uint64_t seed, std::vector<std::string> const& catalog, Instant at) {
    AppUsageSnapshot snap;
    snap.at = at;
    auto const since = std::chrono::floor<std::chrono::seconds>(at - Instant{utc_day(at)}).count();
    std::int64_t elapsed = since;
    snap.day = utc_day(at);
    if (at == Instant{utc_day(at)}) {
        snap.day -= std::chrono::days{1};
        elapsed = 86400;
    }
    for (auto const& app : catalog) {
        snap.foreground_s[app] = 0;
    }
    for (auto const& s : app_sessions(seed, snap.day, catalog)) {
        if (s.start_s >= elapsed) break;
        snap.foreground_s[s.app] += std::min(s.end_s, elapsed) - s.start_s;
    }
    return snap;
}

std::vector<AppUsageSnapshot> generate_app_usage(std::uint64_t seed, Day day, std::vector<std::string> const& catalog,
                                                 double cadence_s) {
    require_cadence(cadence_s);
    auto const has = [&](std::string_view name) { return std::find(catalog.begin(), catalog.end(), name) != catalog.end(); };
    if (!has("phone_calls") || !has("sms")) {
        throw Error(ErrorCode::InvalidSpec, "app catalog must include phone_calls and sms");
    }
    Instant const begin{day};
    Instant const end = begin + std::chrono::days{1};
    std::vector<AppUsageSnapshot> out;
    for (auto k = tick_at_or_after(begin + Duration{1}, cadence_s); tick_time(k, cadence_s) <= end; ++k) {
        out.push_back(app_usage_snapshot(seed, catalog, tick_time(k, cadence_s)));
    }
    return out;
}

// --------------------------------------------------------------- sync

SyncDecision sync_decision(std::size_t buffered, DeviceConditions const& conditions, bool manual_trigger) noexcept {
    if (manual_trigger) return SyncDecision::Sync;
    if (buffered > 0 && conditions.wifi_connected && conditions.battery_pct >= kSyncBatteryThreshold) {
        return SyncDecision::Sync;
    }
    return SyncDecision::Hold;
}

// ------------------------------------------------------------ payloads

std::string encode_imu_payload(Sensor sensor, double hz, std::span<ImuSample const> samples) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& s : samples) {
        rows.push_back({round_to(s.x, 1e-4), round_to(s.y, 1e-4), round_to(s.z, 1e-4)});
    }
    nlohmann::json doc = {{"sensor", sensor_name(sensor)}, {"hz", hz}, {"samples", rows}};
    doc["start"] = samples.empty() ? nlohmann::json(nullptr) : nlohmann::json(format_instant(samples.front().t));
    return doc.dump();
}

std::string encode_location_payload(std::span<LocationSample const> samples) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& s : samples) {
        rows.push_back({{"t", format_instant(s.t)},
                        {"latitude_deg", s.point.latitude_deg},
                        {"longitude_deg", s.point.longitude_deg},
                        {"altitude_m", s.point.altitude_m},
                        {"accuracy_m", round_to(s.accuracy_m, 0.01)}});
    }
    return nlohmann::json{{"sensor", "location"}, {"samples", rows}}.dump();
}

std::string encode_activity_payload(std::span<ActivityEvent const> events) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& e : events) {
        rows.push_back({{"t", format_instant(e.t)}, {"label", activity_name(e.label)}, {"confidence", e.confidence}});
    }
    return nlohmann::json{{"sensor", "activity"}, {"samples", rows}}.dump();
}

std::string encode_app_usage_payload(AppUsageSnapshot const& snapshot) {
    return nlohmann::json{{"sensor", "application_usage"},
                          {"day", format_day(snapshot.day)},
                          {"t", format_instant(snapshot.at)},
                          {"foreground_s", snapshot.foreground_s}}
        .dump();
}

}  // namespace rmon::sim
