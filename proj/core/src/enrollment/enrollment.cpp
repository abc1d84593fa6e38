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

#include "rmon/enrollment/enrollment.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "rmon/common/digest.hpp"
#include "rmon/common/error.hpp"
#include "rmon/common/json_util.hpp"

namespace rmon {
namespace {

constexpr int kPayloadVersion = 1;

[[noreturn]] void malformed(std::string const& what) { throw Error(ErrorCode::MalformedPayload, what); }

bool by_label_then_ordinal(Registration const& a, Registration const& b) {
    return std::tie(a.subject_label, a.ordinal) < std::tie(b.subject_label, b.ordinal);
}

}  // namespace

bool split_token_id(std::string_view token_id, std::string& subject_label, int& ordinal) {
    auto const pos = token_id.rfind('_');
    if (pos == std::string_view::npos || pos == 0 || pos + 1 >= token_id.size()) {
        return false;
    }
    auto const digits = token_id.substr(pos + 1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value < 1 || digits.front() == '0') {
        return false;
    }
    subject_label = std::string(token_id.substr(0, pos));
    ordinal = value;
    return true;
}

std::string encode_qr_payload(EnrollmentToken const& token) {
    nlohmann::json doc = {{"v", kPayloadVersion},
                          {"token_id", token.token_id()},
                          {"study_id", token.study_id},
                          {"server", token.server_address},
                          {"secret", token.secret.hex()}};
    doc["auth"] = token.auth_hint ? nlohmann::json(*token.auth_hint) : nlohmann::json(nullptr);
    // nlohmann::json objects are std::map backed: keys come out sorted.
    return doc.dump();
}

EnrollmentToken parse_qr_payload(std::string_view payload) {
    auto const doc = json_util::parse(payload);
    json_util::require_object(doc, {"v", "token_id", "study_id", "server", "secret", "auth"});
    if (doc.size() != 6) {
        malformed("payload must carry v, token_id, study_id, server, secret and auth");
    }
    if (json_util::get_int(doc, "v") != kPayloadVersion) {
        malformed("unsupported payload version");
    }
    EnrollmentToken token;
    token.study_id = json_util::get_string(doc, "study_id");
    token.server_address = json_util::get_string(doc, "server");
    token.auth_hint = json_util::get_optional_string(doc, "auth");
    auto const token_id = json_util::get_string(doc, "token_id");
    if (!split_token_id(token_id, token.subject_label, token.ordinal)) {
        malformed("token_id '" + token_id + "' is not <subject>_<n>");
    }
    auto const secret = json_util::get_string(doc, "secret");
    if (secret.size() != 32 || !is_lower_hex(secret)) {
        malformed("secret must be 32 lowercase hex digits");
    }
    token.secret = Secret128::from_hex(secret);
    return token;
}

std::string_view to_string(LeftReason r) noexcept {
    return r == LeftReason::UserLeft ? "USER_LEFT" : "AUTO_DURATION";
}

LeftReason parse_left_reason(std::string_view text) {
    if (text == "USER_LEFT") return LeftReason::UserLeft;
    if (text == "AUTO_DURATION") return LeftReason::AutoDuration;
    malformed("unknown leave reason '" + std::string(text) + "'");
}

std::optional<int> Registration::leave_status_code() const noexcept {
    if (!left_reason) {
        return std::nullopt;
    }
    return *left_reason == LeftReason::UserLeft ? 1 : 2;
}

nlohmann::json to_json(Registration const& reg) {
    nlohmann::json doc = {{"study_id", reg.study_id},
                          {"subject_label", reg.subject_label},
                          {"token_id", reg.token_id()},
                          {"device_id", reg.device_id},
                          {"date_registered", format_instant(reg.date_registered)}};
    doc["date_left"] = reg.date_left ? nlohmann::json(format_instant(*reg.date_left)) : nlohmann::json(nullptr);
    doc["left_reason"] = reg.left_reason ? nlohmann::json(to_string(*reg.left_reason)) : nlohmann::json(nullptr);
    auto const code = reg.leave_status_code();
    doc["status_code"] = code ? nlohmann::json(*code) : nlohmann::json(nullptr);
    return doc;
}

Registration registration_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"study_id", "subject_label", "token_id", "device_id", "date_registered",
                                    "date_left", "left_reason", "status_code"});
    Registration reg;
    reg.study_id = json_util::get_string(doc, "study_id");
    auto const token_id = json_util::get_string(doc, "token_id");
    if (!split_token_id(token_id, reg.subject_label, reg.ordinal)) {
        malformed("bad token_id");
    }
    reg.device_id = json_util::get_string(doc, "device_id");
    reg.date_registered = parse_instant(json_util::get_string(doc, "date_registered"));
    if (auto left = json_util::get_optional_string(doc, "date_left")) {
        reg.date_left = parse_instant(*left);
    }
    if (auto reason = json_util::get_optional_string(doc, "left_reason")) {
        reg.left_reason = parse_left_reason(*reason);
    }
    return reg;
}

std::vector<EnrollmentToken> EnrollmentBook::generate_tokens(std::string_view study_id,
                                                             std::string_view subject_label, int n_codes,
                                                             std::string_view server_address,
                                                             std::optional<std::string> auth_hint,
                                                             SecretSource& secrets) {
    auto const cfg = registry_.get(study_id);
    if (cfg.state == StudyState::Closed) {
        throw Error(ErrorCode::StudyClosed, "study '" + cfg.study_id + "' is closed");
    }
    if (n_codes < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_codes must be >= 1");
    }
    if (!is_valid_identifier(subject_label)) {
        throw Error(ErrorCode::InvalidArgument, "subject label must be 1-64 characters of [A-Za-z0-9_.-]");
    }
    std::lock_guard lock(mutex_);
    for (auto const& [key, record] : tokens_) {
        if (key.first == study_id && record.token.subject_label == subject_label) {
            throw Error(ErrorCode::DuplicateSubjectLabel,
                        "subject '" + std::string(subject_label) + "' already has tokens");
        }
    }
    std::vector<EnrollmentToken> out;
    for (int i = 1; i <= n_codes; ++i) {
        EnrollmentToken token;
        token.study_id = std::string(study_id);
        token.subject_label = std::string(subject_label);
        token.ordinal = i;
        token.server_address = std::string(server_address);
        token.auth_hint = auth_hint;
        token.secret = secrets.next();
        out.push_back(token);
    }
    for (auto const& token : out) {
        tokens_.emplace(Key{token.study_id, token.token_id()}, TokenRecord{token, false});
    }
    return out;
}

Registration EnrollmentBook::activate(std::string_view payload, std::string_view device_id, Instant now,
                                      bool switch_device) {
    auto const presented = parse_qr_payload(payload);
    if (!is_valid_device_id(device_id)) {
        malformed("device_id must be UUID-like");
    }
    if (!registry_.exists(presented.study_id)) {
        throw Error(ErrorCode::UnknownToken, "no token '" + presented.token_id() + "'");
    }
    auto const cfg = registry_.get(presented.study_id);

    std::lock_guard lock(mutex_);
    auto const key = Key{presented.study_id, presented.token_id()};
    auto const it = tokens_.find(key);
    if (it == tokens_.end() || !secrets_equal(it->second.token.secret, presented.secret)) {
        throw Error(ErrorCode::UnknownToken, "no token '" + presented.token_id() + "'");
    }
    if (cfg.state == StudyState::Closed) {
        throw Error(ErrorCode::StudyClosed, "study '" + cfg.study_id + "' is closed");
    }
    if (it->second.consumed) {
        throw Error(ErrorCode::TokenAlreadyUsed, "token '" + presented.token_id() + "' was already used");
    }
    it->second.consumed = true;

    if (switch_device) {
        for (auto& [other_key, other] : registrations_) {
            if (other_key.first == presented.study_id && other.subject_label == presented.subject_label &&
                other.active()) {
                other.date_left = now;
                other.left_reason = LeftReason::UserLeft;
            }
        }
    }

    Registration reg;
    reg.study_id = presented.study_id;
    reg.subject_label = presented.subject_label;
    reg.ordinal = presented.ordinal;
    reg.device_id = std::string(device_id);
    reg.date_registered = now;
    registrations_.emplace(key, reg);
    return reg;
}

Registration EnrollmentBook::leave(std::string_view study_id, std::string_view token_id, Instant now,
                                   LeftReason reason) {
    std::lock_guard lock(mutex_);
    auto const it = registrations_.find(Key{std::string(study_id), std::string(token_id)});
    if (it == registrations_.end()) {
        throw Error(ErrorCode::NotRegistered, "token '" + std::string(token_id) + "' has no registration");
    }
    auto& reg = it->second;
    if (!reg.active()) {
        throw Error(ErrorCode::AlreadyLeft, "token '" + std::string(token_id) + "' already left");
    }
    reg.date_left = std::max(now, reg.date_registered);
    reg.left_reason = reason;
    return reg;
}

std::vector<Registration> EnrollmentBook::close_all(std::string_view study_id, Instant now) {
    std::lock_guard lock(mutex_);
    std::vector<Registration> closed;
    for (auto& [key, reg] : registrations_) {
        if (key.first == study_id && reg.active()) {
            reg.date_left = std::max(now, reg.date_registered);
            reg.left_reason = LeftReason::AutoDuration;
            closed.push_back(reg);
        }
    }
    std::sort(closed.begin(), closed.end(), by_label_then_ordinal);
    return closed;
}

Registration EnrollmentBook::authenticate(std::string_view study_id, std::string_view token_id,
                                          Secret128 const& secret) const {
    std::lock_guard lock(mutex_);
    Key const key{std::string(study_id), std::string(token_id)};
    auto const reg = registrations_.find(key);
    if (reg == registrations_.end()) {
        throw Error(ErrorCode::UnknownRegistration, "token '" + std::string(token_id) + "' has no registration");
    }
    auto const token = tokens_.find(key);
    if (token == tokens_.end() || !secrets_equal(token->second.token.secret, secret)) {
        throw Error(ErrorCode::AuthFailure, "secret does not match token '" + std::string(token_id) + "'");
    }
    return reg->second;
}

std::optional<Registration> EnrollmentBook::registration(std::string_view study_id,
                                                         std::string_view token_id) const {
    std::lock_guard lock(mutex_);
    auto const it = registrations_.find(Key{std::string(study_id), std::string(token_id)});
    if (it == registrations_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Registration> EnrollmentBook::registrations(std::string_view study_id) const {
    std::vector<Registration> out;
    {
        std::lock_guard lock(mutex_);
        for (auto const& [key, reg] : registrations_) {
            if (key.first == study_id) {
                out.push_back(reg);
            }
        }
    }
    std::sort(out.begin(), out.end(), by_label_then_ordinal);
    return out;
}

std::vector<EnrollmentToken> EnrollmentBook::tokens(std::string_view study_id) const {
    std::vector<EnrollmentToken> out;
    {
        std::lock_guard lock(mutex_);
        for (auto const& [key, record] : tokens_) {
            if (key.first == study_id) {
                out.push_back(record.token);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](EnrollmentToken const& a, EnrollmentToken const& b) {
        return std::tie(a.subject_label, a.ordinal) < std::tie(b.subject_label, b.ordinal);
    });
    return out;
}

std::vector<std::string> EnrollmentBook::subjects(std::string_view study_id) const {
    std::set<std::string> labels;
    std::lock_guard lock(mutex_);
    for (auto const& [key, record] : tokens_) {
        if (key.first == study_id) {
            labels.insert(record.token.subject_label);
        }
    }
    return {labels.begin(), labels.end()};
}

bool EnrollmentBook::has_subject(std::string_view study_id, std::string_view subject_label) const {
    std::lock_guard lock(mutex_);
    for (auto const& [key, record] : tokens_) {
        if (key.first == study_id && record.token.subject_label == subject_label) {
            return true;
        }
    }
    return false;
}

std::vector<SubjectActivity> EnrollmentBook::subject_activity(std::string_view study_id) const {
    std::map<std::string, SubjectActivity> by_label;
    std::lock_guard lock(mutex_);
    for (auto const& [key, record] : tokens_) {
        if (key.first == study_id) {
            by_label[record.token.subject_label].subject_label = record.token.subject_label;
        }
    }
    for (auto const& [key, reg] : registrations_) {
        if (key.first == study_id) {
            auto& entry = by_label[reg.subject_label];
            entry.subject_label = reg.subject_label;
            entry.registered_at.push_back(reg.date_registered);
        }
    }
    std::vector<SubjectActivity> out;
    for (auto& [label, activity] : by_label) {
        out.push_back(std::move(activity));
    }
    return out;
}

}  // namespace rmon
