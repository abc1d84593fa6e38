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

#include <atomic>
#include <chrono>
#include <string>
#include <string_view>

namespace rmon {

/// UTC instant at millisecond resolution. All timestamps in the platform are
/// UTC; there is no local-time handling anywhere.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Duration = std::chrono::milliseconds;
using Day = std::chrono::sys_days;

/// "2020-08-10T23:06:25Z", with ".mmm" appended only when the instant has a
/// sub-second part.
[[nodiscard]] std::string format_instant(Instant t);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z" and the space-separated table form
/// "YYYY-MM-DD HH:MM:SS". Throws Error(InvalidArgument) otherwise.
[[nodiscard]] Instant parse_instant(std::string_view text);

/// "2020-08-10"
[[nodiscard]] std::string format_day(Day d);

[[nodiscard]] inline Day utc_day(Instant t) {
    return std::chrono::floor<std::chrono::days>(t);
}

[[nodiscard]] inline Instant from_seconds(double s) {
    return Instant{Duration{static_cast<std::int64_t>(s * 1000.0)}};
}

[[nodiscard]] inline double to_seconds(Duration d) {
    return static_cast<double>(d.count()) / 1000.0;
}

/// Seconds elapsed since the UTC midnight that starts t's day.
[[nodiscard]] inline double seconds_since_midnight(Instant t) {
    return to_seconds(t - Instant{utc_day(t)});
}

class Clock {
  public:
    virtual ~Clock() = default;
    [[nodiscard]] virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
  public:
    [[nodiscard]] Instant now() const override {
        return std::chrono::floor<Duration>(std::chrono::system_clock::now());
    }
};

/// Externally driven clock used by tests and the fleet simulator.
class ManualClock final : public Clock {
  public:
    explicit ManualClock(Instant start = Instant{}) : ms_(start.time_since_epoch().count()) {}

    [[nodiscard]] Instant now() const override { return Instant{Duration{ms_.load()}}; }
    void set(Instant t) { ms_.store(t.time_since_epoch().count()); }
    void advance(Duration d) { ms_.fetch_add(d.count()); }

  private:
    std::atomic<std::int64_t> ms_;
};

}  // namespace rmon
