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

#include "rmon/common/time.hpp"

#include <charconv>
#include <cstdio>

#include "rmon/common/error.hpp"

namespace rmon {
namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    auto const* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

[[noreturn]] void bad_instant(std::string_view text) {
    throw Error(ErrorCode::InvalidArgument, "not a UTC timestamp: '" + std::string(text) + "'");
}

}  // namespace

std::string format_day(Day d) {
    std::chrono::year_month_day const ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_instant(Instant t) {
    auto const day = utc_day(t);
    auto const ms = (t - Instant{day}).count();
    auto const secs = ms / 1000;
    auto const frac = ms % 1000;
    char buf[32];
    if (frac == 0) {
        std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lldZ", static_cast<long long>(secs / 3600),
                      static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60));
    } else {
        std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lld.%03lldZ",
                      static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                      static_cast<long long>(secs % 60), static_cast<long long>(frac));
    }
    return format_day(day) + buf;
}

Instant parse_instant(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
    if (text.size() < 19 || !read_int(text, 0, 4, y) || text[4] != '-' || !read_int(text, 5, 2, mo) ||
        text[7] != '-' || !read_int(text, 8, 2, d) || (text[10] != 'T' && text[10] != ' ') ||
        !read_int(text, 11, 2, h) || text[13] != ':' || !read_int(text, 14, 2, mi) || text[16] != ':' ||
        !read_int(text, 17, 2, s)) {
        bad_instant(text);
    }
    bool const iso = text[10] == 'T';
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        std::size_t const start = ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            ++pos;
        }
        auto const digits = pos - start;
        if (digits == 0) {
            bad_instant(text);
        }
        // millisecond resolution; extra digits truncate
        int scale = 100;
        for (std::size_t i = start; i < pos && i < start + 3; ++i) {
            ms += (text[i] - '0') * scale;
            scale /= 10;
        }
    }
    if (iso) {
        if (pos != text.size() - 1 || text[pos] != 'Z') {
            bad_instant(text);
        }
    } else if (pos != text.size()) {
        bad_instant(text);
    }
    std::chrono::year_month_day const ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        bad_instant(text);
    }
    return Instant{Day{ymd}} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s} +
           Duration{ms};
}

}  // namespace rmon
