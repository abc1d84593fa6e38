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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/common/ids.hpp"
#include "rmon/common/time.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon {

/// One-time enrollment credential. token_id is "<subject_label>_<ordinal>",
/// ordinal 1 is the primary code and higher ordinals are backups.
struct EnrollmentToken {
    std::string study_id;
    std::string subject_label;
    int ordinal = 1;
    std::string server_address;
    std::optional<std::string> auth_hint;
    Secret128 secret;

    [[nodiscard]] std::string token_id() const { return subject_label + "_" + std::to_string(ordinal); }

    friend bool operator==(EnrollmentToken const&, EnrollmentToken const&) = default;
};

/// Splits "<label>_<n>" into its parts. Returns false unless n >= 1.
[[nodiscard]] bool split_token_id(std::string_view token_id, std::string& subject_label, int& ordinal);

/// Canonical payload: {"auth":..,"secret":..,"server":..,"study_id":..,
/// "token_id":..,"v":1} with keys sorted and no whitespace. "auth" is null
/// when the token carries no auth hint; "secret" is 32 lowercase hex digits.
[[nodiscard]] std::string encode_qr_payload(EnrollmentToken const& token);

/// Inverse of encode_qr_payload. Throws Error(MalformedPayload).
[[nodiscard]] EnrollmentToken parse_qr_payload(std::string_view payload);

enum class LeftReason { UserLeft, AutoDuration };

[[nodiscard]] std::string_view to_string(LeftReason r) noexcept;
/// Throws Error(MalformedPayload) for anything but USER_LEFT / AUTO_DURATION.
[[nodiscard]] LeftReason parse_left_reason(std::string_view text);

struct Registration {
    std::string study_id;
    std::string subject_label;
    int ordinal = 1;
    std::string device_id;
    Instant date_registered{};
    std::optional<Instant> date_left;
    std::optional<LeftReason> left_reason;

    [[nodiscard]] std::string token_id() const { return subject_label + "_" + std::to_string(ordinal); }
    [[nodiscard]] bool active() const noexcept { return !date_left.has_value(); }

    /// 1 for USER_LEFT, 2 for AUTO_DURATION, nothing while active.
    [[nodiscard]] std::optional<int> leave_status_code() const noexcept;

    friend bool operator==(Registration const&, Registration const&) = default;
};

/// Registration document; never contains the token secret.
[[nodiscard]] nlohmann::json to_json(Registration const& reg);
[[nodiscard]] Registration registration_from_json(nlohmann::json const& doc);

/// Token and registration book for all studies. All mutations happen under one
/// lock, so consuming a token is atomic: of any number of concurrent
/// activations of the same token exactly one succeeds.
class EnrollmentBook {
  public:
    explicit EnrollmentBook(StudyRegistry const& registry) : registry_(registry) {}

    /// Tokens <label>_1 .. <label>_n. Throws UnknownStudy, StudyClosed,
    /// DuplicateSubjectLabel, or InvalidArgument (n < 1, bad label).
    std::vector<EnrollmentToken> generate_tokens(std::string_view study_id, std::string_view subject_label,
                                                 int n_codes, std::string_view server_address,
                                                 std::optional<std::string> auth_hint, SecretSource& secrets);

    /// Consumes the token named by the payload. With `switch_device`, every
    /// other active registration of the same subject is closed as USER_LEFT.
    /// Throws MalformedPayload, UnknownToken, TokenAlreadyUsed, StudyClosed.
    Registration activate(std::string_view payload, std::string_view device_id, Instant now,
                          bool switch_device = false);

    /// Throws NotRegistered or AlreadyLeft.
    Registration leave(std::string_view study_id, std::string_view token_id, Instant now, LeftReason reason);

    /// Closes every active registration of a study with AUTO_DURATION.
    std::vector<Registration> close_all(std::string_view study_id, Instant now);

    /// Device authentication. Throws UnknownRegistration when the token has
    /// no registration and AuthFailure when the secret does not match.
    [[nodiscard]] Registration authenticate(std::string_view study_id, std::string_view token_id,
                                            Secret128 const& secret) const;

    [[nodiscard]] std::optional<Registration> registration(std::string_view study_id,
                                                           std::string_view token_id) const;
    [[nodiscard]] std::vector<Registration> registrations(std::string_view study_id) const;
    [[nodiscard]] std::vector<EnrollmentToken> tokens(std::string_view study_id) const;
    [[nodiscard]] std::vector<std::string> subjects(std::string_view study_id) const;
    [[nodiscard]] bool has_subject(std::string_view study_id, std::string_view subject_label) const;
    [[nodiscard]] std::vector<SubjectActivity> subject_activity(std::string_view study_id) const;

  private:
    using Key = std::pair<std::string, std::string>;  // (study_id, token_id)

    struct TokenRecord {
        EnrollmentToken token;
        bool consumed = false;
    };

    StudyRegistry const& registry_;
    mutable std::mutex mutex_;
    std::map<Key, TokenRecord> tokens_;
    std::map<Key, Registration> registrations_;
};

}  // namespace rmon
