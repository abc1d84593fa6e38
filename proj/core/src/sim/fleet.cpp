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

#include "rmon/sim/fleet.hpp"

#include <chrono>
#include <thread>

#include <openssl/evp.h>

#include "rmon/common/digest.hpp"
#include "rmon/common/error.hpp"

namespace rmon::sim {
namespace fs = std::filesystem;

namespace {

class LogDigest {
  public:
    LogDigest() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
    ~LogDigest() { EVP_MD_CTX_free(ctx_); }
    LogDigest(LogDigest const&) = delete;
    LogDigest& operator=(LogDigest const&) = delete;

    void update(std::string_view line) {
        EVP_DigestUpdate(ctx_, line.data(), line.size());
        EVP_DigestUpdate(ctx_, "\n", 1);
    }
    std::string finish() {
        unsigned char out[EVP_MAX_MD_SIZE];
        unsigned int n = 0;
        EVP_DigestFinal_ex(ctx_, out, &n);
        return to_hex({reinterpret_cast<char const*>(out), n});
    }

  private:
    EVP_MD_CTX* ctx_;
};

}  // namespace

std::size_t FleetResult::generated() const {
    std::size_t n = 0;
    for (auto const& d : devices) n += d.stats.generated;
    return n;
}

std::size_t FleetResult::stored() const {
    std::size_t n = 0;
    for (auto const& d : devices) n += d.stats.stored;
    return n;
}

std::size_t FleetResult::duplicates() const {
    std::size_t n = 0;
    for (auto const& d : devices) n += d.stats.duplicates;
    return n;
}

std::size_t FleetResult::buffered() const {
    std::size_t n = 0;
    for (auto const& d : devices) n += d.buffered_at_end;
    return n;
}

std::size_t FleetResult::crashes() const {
    std::size_t n = 0;
    for (auto const& d : devices) n += d.stats.crashes;
    return n;
}

FleetResult run_fleet(Scenario const& scenario, Transport& transport, FleetOptions const& options) {
    if (fs::exists(options.workdir) && !fs::is_empty(options.workdir)) {
        throw Error(ErrorCode::ScenarioInvalid, "workdir " + options.workdir.string() + " is not empty");
    }
    fs::create_directories(options.workdir);

    FleetResult result;
    LogDigest digest;
    EventSink const emit = [&](nlohmann::json e) {
        auto const line = e.dump();
        digest.update(line);
        ++result.events;
        if (options.log_line) options.log_line(line);
    };
    auto const set_clock = [&](Instant t) {
        if (options.server_clock != nullptr) options.server_clock->set(t);
    };

    ApiClient client(transport, options.admin_token);
    auto const study_id = scenario.study_config.study_id;
    set_clock(scenario.start);
    (void)client.create_study(scenario.study);
    {
        auto e = nlohmann::json{{"t", format_instant(scenario.start)}, {"event", "study_created"}, {"study_id", study_id}};
        emit(std::move(e));
    }

    std::vector<DeviceActor> devices;
    devices.reserve(scenario.devices.size());
    for (std::size_t i = 0; i < scenario.devices.size(); ++i) {
        auto const& spec = scenario.devices[i];
        devices.emplace_back(spec, i, options.seed, options.workdir / spec.name, scenario.app_catalog);
        auto const payloads = client.generate_tokens(study_id, {spec.subject_label, std::nullopt, std::nullopt});
        devices.back().hand_token(payloads.front());
    }

    auto const crashes = crash_schedule(scenario, options.seed);
    std::vector<std::size_t> next_crash(devices.size(), 0);

    auto const wall_start = std::chrono::steady_clock::now();
    for (Instant t = scenario.start; t < scenario.end(); t += scenario.step) {
        if (options.speedup > 0.0) {
            auto const target = std::chrono::duration<double>(to_seconds(t - scenario.start) / options.speedup);
            std::this_thread::sleep_until(wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(target));
        }
        set_clock(t);
        bool const sync_tick = (t - scenario.start).count() % scenario.sync_interval.count() == 0;
        for (std::size_t i = 0; i < devices.size(); ++i) {
            auto& d = devices[i];
            auto& k = next_crash[i];
            while (k < crashes[i].size() && crashes[i][k].at <= t) {
                if (crashes[i][k].mode == CrashMode::Idle) {
                    d.crash(t, emit);
                } else {
                    d.arm_mid_upload_crash();
                }
                ++k;
            }
            d.step(t, sync_tick, client, emit);
        }
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    result.end = scenario.end();
    set_clock(result.end);
    result.qc = client.qc(study_id, result.end);

    for (auto const& d : devices) {
        DeviceReport r;
        r.name = d.name();
        r.device_id = d.device_id();
        r.subject_label = d.spec().subject_label;
        r.seed = d.seed();
        r.home = d.spec().home;
        r.anon_seed_hex = d.stats().anon_seed_hex;
        r.stats = d.stats();
        r.buffered_at_end = d.buffered();
        result.devices.push_back(std::move(r));
    }
    result.log_digest = digest.finish();
    return result;
}

}  // namespace rmon::sim
