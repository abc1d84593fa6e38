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

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rmon/api/documents.hpp"
#include "rmon/api/service.hpp"
#include "rmon/ingestion/ingestion.hpp"

namespace rmon::sim {

/// One request/response exchange. Implementations throw
/// Error(TransportFailure) when no response arrives.
class Transport {
  public:
    virtual ~Transport() = default;
    virtual api::ApiResponse exchange(api::ApiRequest const& request) = 0;
};

/// Everything that crossed the wire, in order.
struct WireRecord {
    api::ApiRequest request;
    api::ApiResponse response;
};

/// Calls an ApiService directly with the exact wire documents. An optional
/// tap sees every exchange.
class InProcessTransport final : public Transport {
  public:
    using Tap = std::function<void(WireRecord const&)>;

    explicit InProcessTransport(api::ApiService const& service, Tap tap = {}) : service_(service), tap_(std::move(tap)) {}
    api::ApiResponse exchange(api::ApiRequest const& request) override;

  private:
    api::ApiService const& service_;
    Tap tap_;
};

/// HTTP client transport for "host:port" or "http://host:port".
class HttpTransport final : public Transport {
  public:
    explicit HttpTransport(std::string const& address);
    ~HttpTransport() override;
    api::ApiResponse exchange(api::ApiRequest const& request) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Typed wrapper over a Transport. Error documents are rethrown as
/// rmon::Error with the server's code.
class ApiClient {
  public:
    ApiClient(Transport& transport, std::string admin_token = {})
        : transport_(transport), admin_token_(std::move(admin_token)) {}

    // admin
    nlohmann::json create_study(nlohmann::json const& request);
    nlohmann::json get_study(std::string const& study_id);
    nlohmann::json list_studies();
    nlohmann::json close_study(std::string const& study_id);
    /// qr_payload of each generated token.
    std::vector<std::string> generate_tokens(std::string const& study_id, api::TokensRequest const& request);
    nlohmann::json qc(std::string const& study_id, std::optional<Instant> now = std::nullopt);
    nlohmann::json overview(std::string const& study_id);
    nlohmann::json notify(std::string const& study_id, api::NotifyRequest const& request);

    // device
    Activation enroll(api::EnrollRequest const& request);
    Registration leave(api::LeaveRequest const& request, Secret128 const& secret);
    BatchReceipt upload(SensorBatch const& batch, Secret128 const& secret);
    std::vector<PushMessage> poll(std::string const& study_id, std::string const& token_id, Secret128 const& secret);

    /// Raw exchange; no error translation.
    api::ApiResponse send(api::ApiRequest request);

  private:
    nlohmann::json call(api::ApiRequest request);
    api::ApiRequest admin(std::string method, std::string path) const;
    static api::ApiRequest device(std::string method, std::string path, Secret128 const& secret);

    Transport& transport_;
    std::string admin_token_;
};

}  // namespace rmon::sim
