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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/api/notifications.hpp"
#include "rmon/api/platform.hpp"
#include "rmon/common/error.hpp"

namespace rmon::api {

/// Wire documents of the /v1 API. Request parsers are strict: unknown fields
/// are rejected with MalformedPayload.

[[nodiscard]] nlohmann::json error_document(ErrorCode code, std::string_view detail);

struct EnrollRequest {
    std::string payload;
    std::string device_id;
    bool switch_device = false;
};
[[nodiscard]] nlohmann::json to_json(EnrollRequest const& r);
[[nodiscard]] EnrollRequest enroll_request_from_json(nlohmann::json const& doc);

[[nodiscard]] nlohmann::json to_json(Activation const& a);
[[nodiscard]] Activation activation_from_json(nlohmann::json const& doc);

struct LeaveRequest {
    std::string study_id;
    std::string token_id;
    LeftReason reason = LeftReason::UserLeft;
};
[[nodiscard]] nlohmann::json to_json(LeaveRequest const& r);
[[nodiscard]] LeaveRequest leave_request_from_json(nlohmann::json const& doc);

struct TokensRequest {
    std::string subject_label;
    std::optional<int> n_codes;
    std::optional<std::string> auth_hint;
};
[[nodiscard]] nlohmann::json to_json(TokensRequest const& r);
[[nodiscard]] TokensRequest tokens_request_from_json(nlohmann::json const& doc);

/// {"tokens": [{"token_id", "subject_label", "qr_payload"}]}. The QR payload
/// is the only place a secret leaves the server.
[[nodiscard]] nlohmann::json tokens_response(std::vector<EnrollmentToken> const& tokens);

struct NotifyRequest {
    std::string title;
    std::string body;
    Receiver receiver;
};
[[nodiscard]] nlohmann::json to_json(NotifyRequest const& r);
[[nodiscard]] NotifyRequest notify_request_from_json(nlohmann::json const& doc);

[[nodiscard]] nlohmann::json to_json(CloseSummary const& s);

struct Route {
    std::string method;
    std::string path;
    std::string auth;  // "admin", "device", or "none"
};

/// Endpoint catalog served under /v1.
[[nodiscard]] std::vector<Route> route_table();

inline constexpr std::string_view kAdminAuthHeader = "Authorization";
inline constexpr std::string_view kDeviceAuthHeader = "X-Token-Secret";
inline constexpr std::string_view kBatchContentType = "application/x-rmon-batch";

}  // namespace rmon::api
