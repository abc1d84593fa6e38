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
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/common/random.hpp"
#include "rmon/common/time.hpp"
#include "rmon/enrollment/enrollment.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon {

/// Target of a push message: every participant, or a set of subject labels.
struct Receiver {
    bool all = true;
    std::set<std::string> subjects;

    [[nodiscard]] static Receiver everyone() { return {}; }
    [[nodiscard]] static Receiver only(std::set<std::string> labels) { return {false, std::move(labels)}; }
};

struct PushMessage {
    std::string message_id;
    std::string study_id;
    std::string title;
    std::string body;
    Receiver receiver;
    Instant created_at{};
    /// Registrations the message was queued for (active at send time).
    std::set<std::string> queued_for;
    /// Registrations that have polled it.
    std::set<std::string> delivered_to;
};

[[nodiscard]] nlohmann::json to_json(PushMessage const& m);
[[nodiscard]] PushMessage push_message_from_json(nlohmann::json const& doc);

/// Push is modeled as device polling: a message is queued for each active
/// registration of its targeted subjects and handed out at most once per
/// registration.
class NotificationCenter {
  public:
    NotificationCenter(StudyRegistry const& registry, EnrollmentBook const& enrollment, std::uint64_t id_seed)
        : registry_(registry), enrollment_(enrollment), ids_(id_seed) {}

    /// Throws UnknownStudy, StudyClosed, UnknownSubject, InvalidArgument
    /// (empty title or body).
    PushMessage send(std::string_view study_id, std::string title, std::string body, Receiver receiver,
                     Instant now);

    /// Undelivered messages queued for the registration, oldest first; marks
    /// them delivered.
    std::vector<PushMessage> poll(std::string_view study_id, std::string_view token_id);

    [[nodiscard]] std::vector<PushMessage> messages(std::string_view study_id) const;

  private:
    StudyRegistry const& registry_;
    EnrollmentBook const& enrollment_;
    mutable std::mutex mutex_;
    Rng ids_;
    std::vector<PushMessage> messages_;
};

}  // namespace rmon
