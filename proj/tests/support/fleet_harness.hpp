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

#include <memory>
#include <set>
#include <string>

#include "rmon/api/platform.hpp"
#include "rmon/api/service.hpp"
#include "rmon/sim/fleet.hpp"
#include "rmon/sim/transport.hpp"
#include "temp_dir.hpp"

namespace rmon::testing {

/// A fleet run against an in-process server on a manual clock, in a fresh
/// temporary directory.
class EmbeddedFleet {
  public:
    explicit EmbeddedFleet(sim::Scenario const& scenario, sim::InProcessTransport::Tap tap = {})
        : scenario_(scenario), clock_(scenario.start) {
        PlatformOptions options;
        options.data_root = dir_.path() / "server";
        options.admin_token = "fleet-admin";
        options.server_address = "inproc://fleet";
        options.id_seed = scenario.seed;
        platform_ = std::make_unique<Platform>(options, clock_, std::make_unique<SeededSecretSource>(scenario.seed));
        service_ = std::make_unique<api::ApiService>(*platform_);
        transport_ = std::make_unique<sim::InProcessTransport>(*service_, std::move(tap));
    }

    sim::FleetResult run() {
        sim::FleetOptions options;
        options.workdir = dir_.path() / "devices";
        options.seed = scenario_.seed;
        options.server_clock = &clock_;
        options.admin_token = "fleet-admin";
        return sim::run_fleet(scenario_, *transport_, options);
    }

    [[nodiscard]] Platform& platform() { return *platform_; }
    [[nodiscard]] std::string const& study_id() const { return scenario_.study_config.study_id; }
    [[nodiscard]] std::filesystem::path server_dir() const { return dir_.path() / "server"; }

    [[nodiscard]] std::set<std::string> object_ids() const {
        std::set<std::string> out;
        for (auto const& oid : platform_->datastore().list_objects(study_id())) out.insert(oid.hex);
        return out;
    }

  private:
    TempDir dir_;
    sim::Scenario scenario_;
    ManualClock clock_;
    std::unique_ptr<Platform> platform_;
    std::unique_ptr<api::ApiService> service_;
    std::unique_ptr<sim::InProcessTransport> transport_;
};

}  // namespace rmon::testing
