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

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rmon/api/platform.hpp"
#include "rmon/common/digest.hpp"
#include "rmon/common/ids.hpp"
#include "rmon/common/random.hpp"
#include "temp_dir.hpp"

#ifndef RMON_FIXTURE_DIR
#error "RMON_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace rmon::testing {

inline std::filesystem::path fixture_path(std::string const& name) {
    return std::filesystem::path(RMON_FIXTURE_DIR) / name;
}

inline std::string read_fixture(std::string const& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// The Fig. 3e participant table replayed through the platform on a manual
/// clock: token generation, activations, leaves and batch uploads at the
/// transcribed instants.
class Fig3eFixture {
  public:
    Fig3eFixture() : doc_(nlohmann::json::parse(read_fixture("fig3e.json"))) {
        clock_.set(parse_instant(doc_.at("created_at").get<std::string>()));
        PlatformOptions options;
        options.data_root = dir_.path() / "data";
        options.server_address = "https://rmon.example.org";
        options.admin_token = "admin";
        platform_ = std::make_unique<Platform>(options, clock_, std::make_unique<SeededSecretSource>(3));
        study_id_ = doc_.at("study").at("study_id").get<std::string>();
        platform_->create_study(create_request_from_json(doc_.at("study")));
        for (auto const& s : doc_.at("subjects")) {
            auto const tokens = platform_->generate_tokens(study_id_, s.at("label").get<std::string>(),
                                                           s.at("n_codes").get<int>());
            for (auto const& t : tokens) tokens_.emplace(t.token_id(), t);
        }
        Rng rng(11);
        for (auto const& e : doc_.at("events")) {
            clock_.set(parse_instant(e.at("at").get<std::string>()));
            auto const op = e.at("op").get<std::string>();
            auto const& token = tokens_.at(e.at("token_id").get<std::string>());
            if (op == "activate") {
                auto const device = e.at("device_id").get<std::string>();
                (void)platform_->enroll(encode_qr_payload(token), device);
                devices_[token.token_id()] = device;
            } else if (op == "leave") {
                (void)platform_->leave(study_id_, token.token_id(), token.secret,
                                       parse_left_reason(e.at("reason").get<std::string>()));
            } else if (op == "batches") {
                auto const from = parse_instant(e.at("created_from").get<std::string>());
                auto const to = parse_instant(e.at("created_to").get<std::string>());
                auto const n = e.at("count").get<int>();
                for (int i = 0; i < n; ++i) {
                    SensorBatch b;
                    b.meta.study_id = study_id_;
                    b.meta.token_id = token.token_id();
                    b.meta.device_id = devices_.at(token.token_id());
                    b.meta.sensor = *parse_sensor(e.at("sensor").get<std::string>());
                    b.meta.batch_id = uuid_v4(rng);
                    b.meta.created_at = n == 1 ? from : from + (to - from) * i / (n - 1);
                    b.payload = R"({"i":)" + std::to_string(i) + R"(,"batch":")" + b.meta.batch_id + "\"}";
                    b.meta.md5_hex = md5_hex(b.payload);
                    (void)platform_->submit_batch(b, token.secret);
                }
            }
        }
        now_ = parse_instant(doc_.at("now").get<std::string>());
        clock_.set(now_);
    }

    [[nodiscard]] Platform& platform() { return *platform_; }
    [[nodiscard]] std::string const& study_id() const { return study_id_; }
    [[nodiscard]] Instant now() const { return now_; }
    [[nodiscard]] nlohmann::json const& expected() const { return doc_.at("expected"); }
    [[nodiscard]] std::map<std::string, EnrollmentToken> const& tokens() const { return tokens_; }

  private:
    nlohmann::json doc_;
    TempDir dir_;
    ManualClock clock_;
    std::unique_ptr<Platform> platform_;
    std::string study_id_;
    std::map<std::string, EnrollmentToken> tokens_;
    std::map<std::string, std::string> devices_;
    Instant now_{};
};

}  // namespace rmon::testing
