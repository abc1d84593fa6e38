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

#include "rmon/api/service.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "rmon/api/documents.hpp"
#include "rmon/common/json_util.hpp"
#include "rmon/ingestion/ingestion.hpp"

namespace rmon::api {
namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        auto const next = path.find('/', pos);
        auto const end = next == std::string_view::npos ? path.size() : next;
        if (end > pos) {
            parts.emplace_back(path.substr(pos, end - pos));
        }
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

bool same_text(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    unsigned char diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff |= static_cast<unsigned char>(a[i] ^ b[i]);
    }
    return diff == 0;
}

ApiResponse json_response(int status, nlohmann::json const& doc) { return {status, "application/json", doc.dump()}; }

ApiResponse ok(nlohmann::json const& doc) { return json_response(200, doc); }

enum class Auth { Admin, Device, None };

void check_credentials(ApiRequest const& req, Auth auth, std::string const& admin_token) {
    auto const* bearer = req.header(kAdminAuthHeader);
    auto const* device = req.header(kDeviceAuthHeader);
    switch (auth) {
        case Auth::Admin: {
            if (device != nullptr) {
                throw Error(ErrorCode::Unauthorized, "device credential on an admin endpoint");
            }
            std::string const expected = "Bearer " + admin_token;
            if (admin_token.empty() || bearer == nullptr || !same_text(*bearer, expected)) {
                throw Error(ErrorCode::Unauthorized, "admin credential required");
            }
            return;
        }
        case Auth::Device:
            if (bearer != nullptr) {
                throw Error(ErrorCode::Unauthorized, "admin credential on a device endpoint");
            }
            if (device == nullptr) {
                throw Error(ErrorCode::Unauthorized, "token secret required");
            }
            return;
        case Auth::None:
            if (bearer != nullptr || device != nullptr) {
                throw Error(ErrorCode::Unauthorized, "endpoint takes no credential");
            }
            return;
    }
}

Secret128 device_secret(ApiRequest const& req) {
    try {
        return Secret128::from_hex(*req.header(kDeviceAuthHeader));
    } catch (Error const&) {
        throw Error(ErrorCode::AuthFailure, "malformed token secret");
    }
}

std::string const& query_param(ApiRequest const& req, std::string const& key) {
    auto const it = req.query.find(key);
    if (it == req.query.end()) {
        throw Error(ErrorCode::MalformedPayload, "missing query parameter '" + key + "'");
    }
    return it->second;
}

void reject_unknown_query(ApiRequest const& req, std::initializer_list<std::string_view> allowed) {
    for (auto const& [key, value] : req.query) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::MalformedPayload, "unknown query parameter '" + key + "'");
        }
    }
}

[[noreturn]] void not_found(ApiRequest const& req) {
    throw Error(ErrorCode::NotFound, "no route for " + req.method + " " + req.path);
}

}  // namespace

std::string const* ApiRequest::header(std::string_view name) const {
    for (auto const& [key, value] : headers) {
        if (iequals(key, name)) {
            return &value;
        }
    }
    return nullptr;
}

ApiResponse ApiService::handle(ApiRequest const& req) const {
    try {
        auto const parts = split_path(req.path);
        if (parts.size() < 2 || parts[0] != "v1") {
            not_found(req);
        }
        auto const& admin = platform_.options().admin_token;
        auto const& m = req.method;

        if (parts[1] == "studies") {
            if (parts.size() == 2) {
                if (m == "POST") {
                    check_credentials(req, Auth::Admin, admin);
                    auto created = platform_.create_study(create_request_from_json(json_util::parse(req.body)));
                    return json_response(201, to_json(created));
                }
                if (m == "GET") {
                    check_credentials(req, Auth::Admin, admin);
                    nlohmann::json list = nlohmann::json::array();
                    for (auto const& cfg : platform_.list_studies()) {
                        list.push_back(to_json(cfg));
                    }
                    return ok({{"studies", list}});
                }
                not_found(req);
            }
            auto const& id = parts[2];
            if (parts.size() == 3 && m == "GET") {
                check_credentials(req, Auth::Admin, admin);
                return ok(to_json(platform_.get_config(id)));
            }
            if (parts.size() != 4) {
                not_found(req);
            }
            auto const& action = parts[3];
            if (action == "close" && m == "POST") {
                check_credentials(req, Auth::Admin, admin);
                return ok(to_json(platform_.close_study(id)));
            }
            if (action == "tokens" && m == "POST") {
                check_credentials(req, Auth::Admin, admin);
                auto const r = tokens_request_from_json(json_util::parse(req.body));
                return json_response(201,
                                     tokens_response(platform_.generate_tokens(id, r.subject_label, r.n_codes,
                                                                               r.auth_hint)));
            }
            if (action == "qc" && m == "GET") {
                check_credentials(req, Auth::Admin, admin);
                reject_unknown_query(req, {"now"});
                std::optional<Instant> now;
                if (auto const it = req.query.find("now"); it != req.query.end()) {
                    now = parse_instant(it->second);
                }
                auto const at = now.value_or(platform_.clock().now());
                return ok(qc::table_to_json(id, at, platform_.qc_table(id, at)));
            }
            if (action == "overview" && m == "GET") {
                check_credentials(req, Auth::Admin, admin);
                return ok(to_json(platform_.study_overview(id)));
            }
            if (action == "notify" && m == "POST") {
                check_credentials(req, Auth::Admin, admin);
                auto r = notify_request_from_json(json_util::parse(req.body));
                return json_response(201, to_json(platform_.send_notification(id, std::move(r.title),
                                                                              std::move(r.body),
                                                                              std::move(r.receiver))));
            }
            not_found(req);
        }

        if (parts.size() != 2) {
            not_found(req);
        }
        auto const& route = parts[1];
        if (route == "enroll" && m == "POST") {
            check_credentials(req, Auth::None, admin);
            auto const r = enroll_request_from_json(json_util::parse(req.body));
            return json_response(201, to_json(platform_.enroll(r.payload, r.device_id, r.switch_device)));
        }
        if (route == "leave" && m == "POST") {
            check_credentials(req, Auth::Device, admin);
            auto const r = leave_request_from_json(json_util::parse(req.body));
            return ok(to_json(platform_.leave(r.study_id, r.token_id, device_secret(req), r.reason)));
        }
        if (route == "batches" && m == "POST") {
            check_credentials(req, Auth::Device, admin);
            auto const batch = decode_upload(req.body);
            auto const receipt = platform_.submit_batch(batch, device_secret(req));
            return json_response(receipt.outcome == BatchOutcome::Stored ? 201 : 200, to_json(receipt));
        }
        if (route == "notifications" && m == "GET") {
            check_credentials(req, Auth::Device, admin);
            reject_unknown_query(req, {"study_id", "token_id"});
            auto const messages = platform_.poll_notifications(query_param(req, "study_id"),
                                                               query_param(req, "token_id"), device_secret(req));
            nlohmann::json list = nlohmann::json::array();
            for (auto const& msg : messages) {
                list.push_back(to_json(msg));
            }
            return ok({{"messages", list}});
        }
        not_found(req);
    } catch (Error const& e) {
        return json_response(http_status(e.code()), error_document(e.code(), e.detail()));
    } catch (std::exception const& e) {
        return json_response(500, error_document(ErrorCode::Internal, e.what()));
    }
}

}  // namespace rmon::api
