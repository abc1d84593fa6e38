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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmon/common/random.hpp"
#include "rmon/common/time.hpp"
#include "rmon/geo/anonymize.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon::sim {

// ---------------------------------------------------------------- IMU

inline constexpr double kGravity = 9.81;
inline constexpr double kRestNoiseSd = 0.02;
inline constexpr double kWalkFrequencyHz = 2.0;
inline constexpr double kWalkAmplitude = 2.0;

enum class Motion { Still, Walking, Handled };

struct ImuSample {
    Instant t{};
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double magnitude() const noexcept;
};

/// Triaxial samples at spec.frequency Hz over [start, start + window).
/// Accelerometer-like sensors carry gravity on z at rest; gyroscope
/// and linear_acceleration are centred on zero. Throws Error(InvalidSpec) for
/// non-IMU sensors or frequencies outside [1, 200] Hz.
[[nodiscard]] std::vector<ImuSample> generate_imu(SensorSpec const& spec, Instant start, Duration window,
                                                  Motion motion, Rng& rng);

enum class Gate { Record, Pause };

inline constexpr double kStillThreshold = 0.05;
inline constexpr double kStillWindowS = 30.0;

/// PAUSE iff the standard deviation of |accel| over the trailing window is
/// strictly below kStillThreshold. Throws Error(InvalidArgument) when the
/// samples span less than one second.
[[nodiscard]] Gate still_gate(std::span<ImuSample const> accel, double window_s = kStillWindowS);

// ----------------------------------------------------------- location

inline constexpr double kMedianAccuracyM = 14.0;

/// Rayleigh scale whose median is kMedianAccuracyM.
[[nodiscard]] double rayleigh_sigma() noexcept;
[[nodiscard]] double draw_accuracy(Rng& rng);

struct LocationProfile {
    geo::Wgs84Point home;
    geo::AnonymizationKey key = geo::AnonymizationKey::identity();
    std::uint64_t seed = 0;
    /// Per-tick step of the walk (meters, per axis).
    double step_sd_m = 150.0;
    /// Number of recent steps the position is made of.
    int memory_ticks = 36;
};

struct LocationSample {
    Instant t{};
    geo::Wgs84Point point;
    double accuracy_m = 0.0;
};

/// Tick k of a cadence sits at the epoch plus k * cadence seconds.
[[nodiscard]] std::int64_t tick_at_or_after(Instant t, double cadence_s);
[[nodiscard]] Instant tick_time(std::int64_t tick, double cadence_s);

/// True (pre-anonymization) position at a tick: home displaced by the sum of
/// the last memory_ticks keyed steps.
[[nodiscard]] geo::Wgs84Point true_position(LocationProfile const& profile, std::int64_t tick);

/// Observed fix at a tick: true position plus Rayleigh error at a uniform
/// bearing, then anonymized with profile.key.
[[nodiscard]] LocationSample observe_location(LocationProfile const& profile, std::int64_t tick,
                                              double cadence_s);

/// One anonymized sample per cadence tick in [from, to). Throws
/// Error(InvalidSpec) for cadence below 60 s.
[[nodiscard]] std::vector<LocationSample> generate_location(LocationProfile const& profile, double cadence_s,
                                                            Instant from, Instant to);

// ---------------------------------------------------------------- HAR

enum class Activity { walking, running, still, on_bicycle, on_vehicle, tilting };

inline constexpr std::array<Activity, 6> kActivities = {Activity::walking,    Activity::running,
                                                        Activity::still,      Activity::on_bicycle,
                                                        Activity::on_vehicle, Activity::tilting};

inline constexpr double kHarSelfTransition = 0.8;
inline constexpr double kHarConfidenceMean = 85.0;
inline constexpr double kHarConfidenceSd = 5.0;
/// The chain restarts from its stationary distribution every block.
inline constexpr std::int64_t kHarBlockTicks = 288;

[[nodiscard]] std::string_view activity_name(Activity a) noexcept;

using TransitionMatrix = std::array<std::array<double, 6>, 6>;
[[nodiscard]] TransitionMatrix har_transition_matrix() noexcept;

[[nodiscard]] Motion motion_of(Activity a) noexcept;

struct ActivityEvent {
    Instant t{};
    Activity label = Activity::still;
    int confidence = 0;
};

/// Label chain keyed by seed. Sequential queries within a block are O(1);
/// other queries replay from the block start.
class HarChain {
  public:
    explicit HarChain(std::uint64_t seed) : seed_(seed) {}
    [[nodiscard]] Activity at(std::int64_t tick);

  private:
    std::uint64_t seed_;
    std::int64_t tick_ = -1;
    Activity label_ = Activity::still;
    bool valid_ = false;
};

[[nodiscard]] ActivityEvent activity_event(HarChain& chain, std::uint64_t seed, std::int64_t tick,
                                           double cadence_s);

/// One event per cadence tick in [from, to). Throws Error(InvalidSpec) for
/// cadence below 60 s.
[[nodiscard]] std::vector<ActivityEvent> generate_har(std::uint64_t seed, Instant from, Instant to,
                                                      double cadence_s = kActivityCadenceS);

// ---------------------------------------------------------- app usage

[[nodiscard]] std::vector<std::string> default_app_catalog();

/// One foreground session, in whole seconds since the day's midnight.
struct UsageSession {
    std::string app;
    std::int64_t start_s = 0;
    std::int64_t end_s = 0;
};

/// Non-overlapping sessions for one UTC day, keyed by (seed, day).
[[nodiscard]] std::vector<UsageSession> app_sessions(std::uint64_t seed, Day day,
                                                     std::vector<std::string> const& catalog);

struct AppUsageSnapshot {
    Day day{};
    Instant at{};
    /// Cumulative foreground seconds since `day`'s midnight, every app.
    std::map<std::string, std::int64_t> foreground_s;
};

/// Counters at `at`. A snapshot exactly at midnight closes the previous day.
[[nodiscard]] AppUsageSnapshot app_usage_snapshot(std::uint64_t seed, std::vector<std::string> const& catalog,
                                                  Instant at);

/// Snapshots at every cadence tick in (day, day + 24h]. Throws
/// Error(InvalidSpec) for cadence below 60 s or without the phone_calls and
/// sms pseudo-apps in the catalog.
[[nodiscard]] std::vector<AppUsageSnapshot> generate_app_usage(std::uint64_t seed, Day day,
                                                               std::vector<std::string> const& catalog,
                                                               double cadence_s);

// --------------------------------------------------------------- sync

inline constexpr double kSyncBatteryThreshold = 20.0;

enum class SyncDecision { Sync, Hold };

struct DeviceConditions {
    bool wifi_connected = true;
    double battery_pct = 100.0;
};

[[nodiscard]] SyncDecision sync_decision(std::size_t buffered, DeviceConditions const& conditions,
                                         bool manual_trigger) noexcept;

// ------------------------------------------------------------ payloads

[[nodiscard]] std::string encode_imu_payload(Sensor sensor, double hz, std::span<ImuSample const> samples);
[[nodiscard]] std::string encode_location_payload(std::span<LocationSample const> samples);
[[nodiscard]] std::string encode_activity_payload(std::span<ActivityEvent const> events);
[[nodiscard]] std::string encode_app_usage_payload(AppUsageSnapshot const& snapshot);

}  // namespace rmon::sim
