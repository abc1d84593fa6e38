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

#include "rmon/sim/transport.hpp"

#include <httplib.h>

#include "rmon/common/error.hpp"
#include "rmon/common/json_util.hpp"

namespace rmon::sim {

api::ApiResponse InProcessTransport::exchange(api::ApiRequest const& request) {
    auto response = service_.handle(request);
    if (tap_) {
        tap_(WireRecord{request, response});
    }
    return response;
}

struct HttpTransport::Impl {
    explicit Impl(std::string const& address) : client(address) {}
    httplib::Client client;
};

namespace {

std::string base_url(std::string const& address) {
    if (address.starts_with("http://")) return address;
    if (address.starts_with("https://")) {
        throw Error(ErrorCode::TransportFailure, "https is terminated outside this client: " + address);
    }
    return "http://" + address;
}

}  // namespace

HttpTransport::HttpTransport(std::string const& address) : impl_(std::make_unique<Impl>(base_url(address))) {
    impl_->client.set_keep_alive(true);
    impl_->client.set_connection_timeout(5);
    impl_->client.set_read_timeout(30);
}

HttpTransport::~HttpTransport() = default;

api::ApiResponse HttpTransport::exchange(api::ApiRequest const& request) {
    httplib::Headers headers;
    for (auto const& [k, v] : request.headers) headers.emplace(k, v);
    std::string path = request.path;
    if (!request.query.empty()) {
        path += "?" + httplib::detail::params_to_query_str(httplib::Params(request.query.begin(), request.query.end()));
    }
    httplib::Result result{nullptr, httplib::Error::Unknown};
    if (request.method == "GET") {
        result = impl_->client.Get(path, headers);
    } else if (request.method == "POST") {
        auto const type = request.path == "/v1/batches" ? std::string(api::kBatchContentType) : "application/json";
        result = impl_->client.Post(path, headers, request.body, type);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unsupported method " + request.method);
    }
    if (!result) {
        throw Error(ErrorCode::TransportFailure, request.method + " " + request.path + ": " + httplib::to_string(result.error()));
    }
    api::ApiResponse out;
    out.status = result->status;
    out.content_type = result->get_header_value("Content-Type");
    out.body = result->body;
    return out;
}

api::ApiResponse ApiClient::send(api::ApiRequest request) { return transport_.exchange(request); }

nlohmann::json ApiClient::call(api::ApiRequest request) {
    auto const response = transport_.exchange(request);
    auto doc = nlohmann::json::parse(response.body, nullptr, false);
    if (response.status >= 400) {
        ErrorCode code = ErrorCode::Internal;
        std::string detail = response.body;
        if (doc.is_object() && doc.contains("error_code") && doc["error_code"].is_string()) {
            if (!parse_error_code(doc["error_code"].get<std::string>(), code)) code = ErrorCode::Internal;
            detail = doc.value("detail", "");
        }
        throw Error(code, detail);
    }
    if (doc.is_discarded()) {
        throw Error(ErrorCode::TransportFailure, "response body is not JSON");
    }
    return doc;
}

api::ApiRequest ApiClient::admin(std::string method, std::string path) const {
    api::ApiRequest r;
    r.method = std::move(method);
    r.path = std::move(path);
    r.headers[std::string(api::kAdminAuthHeader)] = "Bearer " + admin_token_;
    return r;
}

api::ApiRequest ApiClient::device(std::string method, std::string path, Secret128 const& secret) {
    api::ApiRequest r;
    r.method = std::move(method);
    r.path = std::move(path);
    r.headers[std::string(api::kDeviceAuthHeader)] = secret.hex();
    return r;
}

nlohmann::json ApiClient::create_study(nlohmann::json const& request) {
    auto r = admin("POST", "/v1/studies");
    r.body = request.dump();
    return call(std::move(r));
}

nlohmann::json ApiClient::get_study(std::string const& study_id) { return call(admin("GET", "/v1/studies/" + study_id)); }

nlohmann::json ApiClient::list_studies() { return call(admin("GET", "/v1/studies")); }

nlohmann::json ApiClient::close_study(std::string const& study_id) {
    return call(admin("POST", "/v1/studies/" + study_id + "/close"));
}

std::vector<std::string> ApiClient::generate_tokens(std::string const& study_id, api::TokensRequest const& request) {
    auto r = admin("POST", "/v1/studies/" + study_id + "/tokens");
    r.body = to_json(request).dump();
    auto const doc = call(std::move(r));
    std::vector<std::string> out;
    for (auto const& t : doc.at("tokens")) out.push_back(t.at("qr_payload").get<std::string>());
    return out;
}

nlohmann::json ApiClient::qc(std::string const& study_id, std::optional<Instant> now) {
    auto r = admin("GET", "/v1/studies/" + study_id + "/qc");
    if (now) r.query["now"] = format_instant(*now);
    return call(std::move(r));
}

nlohmann::json ApiClient::overview(std::string const& study_id) {
    return call(admin("GET", "/v1/studies/" + study_id + "/overview"));
}

nlohmann::json ApiClient::notify(std::string const& study_id, api::NotifyRequest const& request) {
    auto r = admin("POST", "/v1/studies/" + study_id + "/notify");
    r.body = to_json(request).dump();
    return call(std::move(r));
}

Activation ApiClient::enroll(api::EnrollRequest const& request) {
    api::ApiRequest r;
    r.method = "POST";
    r.path = "/v1/enroll";
    r.body = to_json(request).dump();
    return api::activation_from_json(call(std::move(r)));
}

Registration ApiClient::leave(api::LeaveRequest const& request, Secret128 const& secret) {
    auto r = device("POST", "/v1/leave", secret);
    r.body = to_json(request).dump();
    return registration_from_json(call(std::move(r)));
}

BatchReceipt ApiClient::upload(SensorBatch const& batch, Secret128 const& secret) {
    auto r = device("POST", "/v1/batches", secret);
    r.body = encode_upload(batch);
    return receipt_from_json(call(std::move(r)));
}

std::vector<PushMessage> ApiClient::poll(std::string const& study_id, std::string const& token_id,
                                         Secret128 const& secret) {
    auto r = device("GET", "/v1/notifications", secret);
    r.query["study_id"] = study_id;
    r.query["token_id"] = token_id;
    auto const doc = call(std::move(r));
    std::vector<PushMessage> out;
    for (auto const& m : doc.at("messages")) out.push_back(push_message_from_json(m));
    return out;
}

}  // namespace rmon::sim
