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

#include "rmon/api/documents.hpp"

#include "rmon/common/json_util.hpp"

namespace rmon::api {

nlohmann::json error_document(ErrorCode code, std::string_view detail) {
    return {{"error_code", to_string(code)}, {"detail", detail}};
}

nlohmann::json to_json(EnrollRequest const& r) {
    return {{"payload", r.payload}, {"device_id", r.device_id}, {"switch_device", r.switch_device}};
}

EnrollRequest enroll_request_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"payload", "device_id", "switch_device"});
    EnrollRequest r;
    r.payload = json_util::get_string(doc, "payload");
    r.device_id = json_util::get_string(doc, "device_id");
    if (auto const it = doc.find("switch_device"); it != doc.end()) {
        if (!it->is_boolean()) {
            throw Error(ErrorCode::MalformedPayload, "switch_device must be a boolean");
        }
        r.switch_device = it->get<bool>();
    }
    return r;
}

nlohmann::json to_json(Activation const& a) {
    return {{"registration", to_json(a.registration)}, {"config", to_json(a.config)}};
}

Activation activation_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"registration", "config"});
    return Activation{registration_from_json(json_util::field(doc, "registration")),
                      config_from_json(json_util::field(doc, "config"))};
}

nlohmann::json to_json(LeaveRequest const& r) {
    return {{"study_id", r.study_id}, {"token_id", r.token_id}, {"reason", to_string(r.reason)}};
}

LeaveRequest leave_request_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"study_id", "token_id", "reason"});
    LeaveRequest r;
    r.study_id = json_util::get_string(doc, "study_id");
    r.token_id = json_util::get_string(doc, "token_id");
    r.reason = parse_left_reason(json_util::get_string(doc, "reason"));
    return r;
}

nlohmann::json to_json(TokensRequest const& r) {
    nlohmann::json doc = {{"subject_label", r.subject_label}};
    if (r.n_codes) doc["n_codes"] = *r.n_codes;
    if (r.auth_hint) doc["auth_hint"] = *r.auth_hint;
    return doc;
}

TokensRequest tokens_request_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"subject_label", "n_codes", "auth_hint"});
    TokensRequest r;
    r.subject_label = json_util::get_string(doc, "subject_label");
    if (doc.contains("n_codes")) {
        r.n_codes = static_cast<int>(json_util::get_int(doc, "n_codes"));
    }
    r.auth_hint = json_util::get_optional_string(doc, "auth_hint");
    return r;
}

nlohmann::json tokens_response(std::vector<EnrollmentToken> const& tokens) {
    nlohmann::json list = nlohmann::json::array();
    for (auto const& t : tokens) {
        list.push_back(
            {{"token_id", t.token_id()}, {"subject_label", t.subject_label}, {"qr_payload", encode_qr_payload(t)}});
    }
    return {{"tokens", list}};
}

nlohmann::json to_json(NotifyRequest const& r) {
    nlohmann::json receiver = "ALL";
    if (!r.receiver.all) {
        receiver = nlohmann::json(r.receiver.subjects);
    }
    return {{"title", r.title}, {"body", r.body}, {"receiver", receiver}};
}

NotifyRequest notify_request_from_json(nlohmann::json const& doc) {
    json_util::require_object(doc, {"title", "body", "receiver"});
    NotifyRequest r;
    r.title = json_util::get_string(doc, "title");
    r.body = json_util::get_string(doc, "body");
    auto const& receiver = json_util::field(doc, "receiver");
    if (receiver.is_string() && receiver.get<std::string>() == "ALL") {
        r.receiver = Receiver::everyone();
    } else if (receiver.is_array()) {
        std::set<std::string> labels;
        for (auto const& item : receiver) {
            if (!item.is_string()) {
                throw Error(ErrorCode::MalformedPayload, "receiver entries must be subject labels");
            }
            labels.insert(item.get<std::string>());
        }
        r.receiver = Receiver::only(std::move(labels));
    } else {
        throw Error(ErrorCode::MalformedPayload, "receiver must be \"ALL\" or a list of subject labels");
    }
    return r;
}

nlohmann::json to_json(CloseSummary const& s) {
    nlohmann::json left = nlohmann::json::array();
    for (auto const& r : s.auto_left) {
        left.push_back(to_json(r));
    }
    return {{"study", to_json(s.config)}, {"auto_left", left}};
}

std::vector<Route> route_table() {
    return {
        {"POST", "/v1/studies", "admin"},
        {"GET", "/v1/studies", "admin"},
        {"GET", "/v1/studies/{id}", "admin"},
        {"POST", "/v1/studies/{id}/close", "admin"},
        {"POST", "/v1/studies/{id}/tokens", "admin"},
        {"GET", "/v1/studies/{id}/qc", "admin"},
        {"GET", "/v1/studies/{id}/overview", "admin"},
        {"POST", "/v1/studies/{id}/notify", "admin"},
        {"POST", "/v1/enroll", "none"},
        {"POST", "/v1/leave", "device"},
        {"POST", "/v1/batches", "device"},
        {"GET", "/v1/notifications", "device"},
    };
}

}  // namespace rmon::api
