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

#include "rmon/api/notifications.hpp"

#include "rmon/common/error.hpp"
#include "rmon/common/ids.hpp"
#include "rmon/common/json_util.hpp"

namespace rmon {

nlohmann::json to_json(PushMessage const& m) {
    nlohmann::json receiver;
    if (m.receiver.all) {
        receiver = "ALL";
    } else {
        receiver = nlohmann::json::array();
        for (auto const& s : m.receiver.subjects) {
            receiver.push_back(s);
        }
    }
    return {{"message_id", m.message_id},
            {"study_id", m.study_id},
            {"title", m.title},
            {"body", m.body},
            {"receiver", receiver},
            {"created_at", format_instant(m.created_at)},
            {"queued_for", m.queued_for},
            {"delivered_to", m.delivered_to}};
}

PushMessage push_message_from_json(nlohmann::json const& doc) {
    json_util::require_object(
        doc, {"message_id", "study_id", "title", "body", "receiver", "created_at", "queued_for", "delivered_to"});
    PushMessage m;
    m.message_id = json_util::get_string(doc, "message_id");
    m.study_id = json_util::get_string(doc, "study_id");
    m.title = json_util::get_string(doc, "title");
    m.body = json_util::get_string(doc, "body");
    auto const& receiver = json_util::field(doc, "receiver");
    if (receiver.is_string() && receiver.get<std::string>() == "ALL") {
        m.receiver = Receiver::everyone();
    } else if (receiver.is_array()) {
        m.receiver.all = false;
        for (auto const& s : receiver) {
            m.receiver.subjects.insert(s.get<std::string>());
        }
    } else {
        throw Error(ErrorCode::MalformedPayload, "receiver must be \"ALL\" or a list of subject labels");
    }
    m.created_at = parse_instant(json_util::get_string(doc, "created_at"));
    for (auto const& t : json_util::field(doc, "queued_for")) m.queued_for.insert(t.get<std::string>());
    for (auto const& t : json_util::field(doc, "delivered_to")) m.delivered_to.insert(t.get<std::string>());
    return m;
}

PushMessage NotificationCenter::send(std::string_view study_id, std::string title, std::string body,
                                     Receiver receiver, Instant now) {
    auto const cfg = registry_.get(study_id);
    if (cfg.state == StudyState::Closed) {
        throw Error(ErrorCode::StudyClosed, "study '" + cfg.study_id + "' is closed");
    }
    if (title.empty() || body.empty()) {
        throw Error(ErrorCode::InvalidArgument, "title and body must be non-empty");
    }
    if (!receiver.all) {
        if (receiver.subjects.empty()) {
            throw Error(ErrorCode::InvalidArgument, "receiver list must not be empty");
        }
        for (auto const& label : receiver.subjects) {
            if (!enrollment_.has_subject(study_id, label)) {
                throw Error(ErrorCode::UnknownSubject, "no subject '" + label + "'");
            }
        }
    }
    PushMessage m;
    m.study_id = cfg.study_id;
    m.title = std::move(title);
    m.body = std::move(body);
    m.receiver = std::move(receiver);
    m.created_at = now;
    for (auto const& reg : enrollment_.registrations(study_id)) {
        if (reg.active() && (m.receiver.all || m.receiver.subjects.contains(reg.subject_label))) {
            m.queued_for.insert(reg.token_id());
        }
    }
    std::lock_guard lock(mutex_);
    m.message_id = uuid_v4(ids_);
    messages_.push_back(m);
    return m;
}

std::vector<PushMessage> NotificationCenter::poll(std::string_view study_id, std::string_view token_id) {
    std::vector<PushMessage> out;
    std::lock_guard lock(mutex_);
    std::string const token(token_id);
    for (auto& m : messages_) {
        if (m.study_id == study_id && m.queued_for.contains(token) && !m.delivered_to.contains(token)) {
            m.delivered_to.insert(token);
            out.push_back(m);
        }
    }
    return out;
}

std::vector<PushMessage> NotificationCenter::messages(std::string_view study_id) const {
    std::vector<PushMessage> out;
    std::lock_guard lock(mutex_);
    for (auto const& m : messages_) {
        if (m.study_id == study_id) {
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace rmon
