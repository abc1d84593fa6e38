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

#include <doctest.h>

#include <set>

#include "error_code.hpp"
#include "rmon/api/documents.hpp"
#include "rmon/api/http_server.hpp"
#include "rmon/api/service.hpp"
#include "rmon/sim/transport.hpp"
#include "small_platform.hpp"

using namespace rmon;
using namespace rmon::api;
using rmon::testing::error_of;
using rmon::testing::SmallPlatform;

namespace {

ApiRequest admin(std::string method, std::string path, nlohmann::json body = nullptr) {
    ApiRequest r{std::move(method), std::move(path), {}, {{"authorization", "Bearer admin-token"}}, {}};
    if (!body.is_null()) r.body = body.dump();
    return r;
}

nlohmann::json body_of(ApiResponse const& r) { return nlohmann::json::parse(r.body); }

nlohmann::json ppd() {
    return {{"study_id", "NEW"},
            {"name", "New"},
            {"duration_days", 84},
            {"n_subjects", 60},
            {"sensors", {"activity", "application_usage", "location"}}};
}

}  // namespace

TEST_SUITE("api") {

TEST_CASE("route table") {
    auto const routes = route_table();
    CHECK(routes.size() == 12);
    std::set<std::string> kinds;
    for (auto const& r : routes) kinds.insert(r.auth);
    CHECK(kinds == std::set<std::string>{"admin", "device", "none"});
}

TEST_CASE("admin endpoints") {
    SmallPlatform p;
    ApiService svc(p.platform());
    auto r = svc.handle(admin("POST", "/v1/studies", ppd()));
    CHECK(r.status == 201);
    CHECK(body_of(r).at("state") == "OPEN");
    CHECK(svc.handle(admin("POST", "/v1/studies", ppd())).status == 409);
    CHECK(body_of(svc.handle(admin("POST", "/v1/studies", ppd()))).at("error_code") == "DuplicateStudyId");

    r = svc.handle(admin("GET", "/v1/studies"));
    CHECK(r.status == 200);
    CHECK(body_of(r).at("studies").size() == 2);
    CHECK(body_of(svc.handle(admin("GET", "/v1/studies/NEW"))).at("duration_days") == 84);
    CHECK(svc.handle(admin("GET", "/v1/studies/NOPE")).status == 404);

    r = svc.handle(admin("POST", "/v1/studies/NEW/tokens", {{"subject_label", "S1"}, {"n_codes", 2}}));
    CHECK(r.status == 201);
    auto const tokens = body_of(r).at("tokens");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[1].at("token_id") == "S1_2");
    auto const qr = parse_qr_payload(tokens[0].at("qr_payload").get<std::string>());
    CHECK(qr.server_address == "https://rmon.example.org");

    auto overview = body_of(svc.handle(admin("GET", "/v1/studies/NEW/overview")));
    CHECK(overview.at("total_subjects") == 1);
    CHECK(overview.at("enrolled_subjects") == 0);

    auto qc_req = admin("GET", "/v1/studies/NEW/qc");
    qc_req.query["now"] = "2020-08-11T13:00:00Z";
    auto const table = body_of(svc.handle(qc_req));
    CHECK(table.at("now") == "2020-08-11T13:00:00Z");
    CHECK(table.at("rows").empty());
    qc_req.query["colour"] = "x";
    CHECK(svc.handle(qc_req).status == 400);

    r = svc.handle(admin("POST", "/v1/studies/NEW/close"));
    CHECK(r.status == 200);
    CHECK(body_of(r).at("study").at("state") == "CLOSED");
    CHECK(svc.handle(admin("POST", "/v1/studies/NEW/close")).status == 409);
}

TEST_CASE("auth rules") {
    SmallPlatform p;
    ApiService svc(p.platform());
    ApiRequest none{"GET", "/v1/studies", {}, {}, {}};
    auto r = svc.handle(none);
    CHECK(r.status == 401);
    CHECK(body_of(r).at("error_code") == "Unauthorized");

    auto wrong = admin("GET", "/v1/studies");
    wrong.headers["authorization"] = "Bearer nope";
    CHECK(svc.handle(wrong).status == 401);

    auto device_on_admin = none;
    device_on_admin.headers["X-Token-Secret"] = "00112233445566778899aabbccddeeff";
    CHECK(body_of(svc.handle(device_on_admin)).at("error_code") == "Unauthorized");

    ApiRequest poll{"GET", "/v1/notifications", {{"study_id", "PPD"}, {"token_id", "A_1"}}, {}, {}};
    CHECK(body_of(svc.handle(poll)).at("error_code") == "Unauthorized");
    poll.headers["x-token-secret"] = "not hex";
    CHECK(body_of(svc.handle(poll)).at("error_code") == "AuthFailure");
    auto admin_on_device = poll;
    admin_on_device.headers = {{"Authorization", "Bearer admin-token"}};
    CHECK(body_of(svc.handle(admin_on_device)).at("error_code") == "Unauthorized");

    CHECK(svc.handle(admin("GET", "/v1/nothing")).status == 404);
    CHECK(body_of(svc.handle(admin("DELETE", "/v1/studies"))).at("error_code") == "NotFound");
    CHECK(svc.handle(admin("POST", "/v1/studies", nullptr)).status == 400);
}

TEST_CASE("device flow over the in-process transport") {
    SmallPlatform p;
    ApiService svc(p.platform());
    std::vector<sim::WireRecord> wire;
    sim::InProcessTransport transport(svc, [&](sim::WireRecord const& w) { wire.push_back(w); });
    sim::ApiClient client(transport, "admin-token");

    auto const payloads = client.generate_tokens("PPD", {"S1", 2, std::nullopt});
    auto const token = parse_qr_payload(payloads[0]);
    auto const act = client.enroll({payloads[0], "de01", false});
    CHECK(act.registration.token_id() == "S1_1");
    CHECK(act.config.study_id == "PPD");
    CHECK(error_of([&] { (void)client.enroll({payloads[0], "de01", false}); }) == ErrorCode::TokenAlreadyUsed);

    SensorBatch b;
    b.meta = {"PPD", "S1_1", "de01", Sensor::activity, "7c9e6679-7425-40de-944b-e07fc1f90ae7", p.clock().now(), ""};
    b.payload = R"({"events":[]})";
    b.meta.md5_hex = md5_hex(b.payload);
    CHECK(client.upload(b, token.secret).outcome == BatchOutcome::Stored);
    CHECK(client.upload(b, token.secret).outcome == BatchOutcome::Duplicate);
    auto raw = client.send({"POST", "/v1/batches", {}, {{"X-Token-Secret", token.secret.hex()}}, encode_upload(b)});
    CHECK(raw.status == 200);
    b.payload += " ";
    CHECK(error_of([&] { (void)client.upload(b, token.secret); }) == ErrorCode::ChecksumMismatch);

    auto const sent = client.notify("PPD", {"t", "b", Receiver::everyone()});
    CHECK(sent.at("queued_for").size() == 1);
    CHECK(client.poll("PPD", "S1_1", token.secret).size() == 1);

    auto const left = client.leave({"PPD", "S1_1", LeftReason::UserLeft}, token.secret);
    CHECK(left.leave_status_code() == 1);

    auto const qc = client.qc("PPD");
    REQUIRE(qc.at("rows").size() == 1);
    CHECK(qc.at("rows")[0].at("status_code") == 1);
    CHECK(qc.at("rows")[0].at("sensors").at("activity").at("n_batches") == 1);
    CHECK(wire.size() >= 10);
}

TEST_CASE("HTTP server smoke") {
    SmallPlatform p;
    HttpServer server(p.platform());
    int const port = server.bind("127.0.0.1", 0);
    CHECK(port > 0);
    server.start();
    sim::HttpTransport transport("127.0.0.1:" + std::to_string(port));
    sim::ApiClient client(transport, "admin-token");
    CHECK(client.list_studies().at("studies").size() == 1);
    auto const payloads = client.generate_tokens("PPD", {"S1", 1, "sso:clinic"});
    CHECK(parse_qr_payload(payloads.at(0)).auth_hint == "sso:clinic");
    auto const act = client.enroll({payloads[0], "de01", false});
    CHECK(act.registration.device_id == "de01");
    sim::ApiClient anonymous(transport);
    CHECK(error_of([&] { (void)anonymous.list_studies(); }) == ErrorCode::Unauthorized);
    server.stop();
    CHECK(error_of([&] { (void)client.list_studies(); }) == ErrorCode::TransportFailure);
}

}
