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

// rmon: server, fleet simulator and datastore checker.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <unistd.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rmon/api/http_server.hpp"
#include "rmon/api/platform.hpp"
#include "rmon/api/service.hpp"
#include "rmon/common/error.hpp"
#include "rmon/common/ids.hpp"
#include "rmon/datastore/datastore.hpp"
#include "rmon/sim/fleet.hpp"
#include "rmon/sim/scenario.hpp"
#include "rmon/sim/transport.hpp"

namespace {

rmon::api::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

std::string env_or(char const* name, std::string fallback) {
    char const* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

int serve(std::string const& host, int port, std::string const& data, std::string server_address) {
    auto const admin = env_or("RMON_ADMIN_TOKEN", "");
    if (admin.empty()) {
        std::cerr << "warning: RMON_ADMIN_TOKEN is unset; admin endpoints will reject every request\n";
    }
    rmon::SystemClock clock;
    rmon::PlatformOptions options;
    options.data_root = data;
    options.admin_token = admin;
    if (server_address.empty()) server_address = "http://" + host + ":" + std::to_string(port);
    options.server_address = server_address;
    rmon::Platform platform(options, clock);
    rmon::api::HttpServer server(platform);
    int const bound = server.bind(host, port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "rmon listening on " << host << ":" << bound << " (data " << data << ")\n";
    server.run();
    g_server = nullptr;
    return 0;
}

int fleet_run(std::string const& scenario_path, std::optional<std::string> const& server,
              std::optional<std::uint64_t> seed_opt, double speedup, std::optional<std::string> const& log_path,
              std::optional<std::string> const& workdir_opt) {
    auto const scenario = rmon::sim::load_scenario(scenario_path);
    auto const seed = seed_opt.value_or(scenario.seed);
    std::filesystem::path const workdir =
        workdir_opt ? std::filesystem::path(*workdir_opt)
                    : std::filesystem::temp_directory_path() /
                          ("rmon-fleet-" + std::to_string(seed) + "-" + std::to_string(::getpid()));

    std::ofstream log;
    if (log_path) {
        log.open(*log_path, std::ios::trunc);
        if (!log) throw rmon::Error(rmon::ErrorCode::InvalidArgument, "cannot open " + *log_path);
    }
    rmon::sim::FleetOptions options;
    options.workdir = workdir / "devices";
    options.seed = seed;
    options.speedup = speedup;
    if (log_path) options.log_line = [&](std::string const& line) { log << line << '\n'; };

    rmon::sim::FleetResult result;
    if (server) {
        options.admin_token = env_or("RMON_ADMIN_TOKEN", "");
        rmon::sim::HttpTransport transport(*server);
        result = rmon::sim::run_fleet(scenario, transport, options);
    } else {
        rmon::ManualClock clock(scenario.start);
        rmon::PlatformOptions platform_options;
        platform_options.data_root = workdir / "server";
        platform_options.admin_token = env_or("RMON_ADMIN_TOKEN", "fleet-admin");
        platform_options.server_address = "inproc://fleet";
        platform_options.id_seed = seed;
        rmon::Platform platform(platform_options, clock, std::make_unique<rmon::SeededSecretSource>(seed));
        rmon::api::ApiService service(platform);
        rmon::sim::InProcessTransport transport(service);
        options.admin_token = platform_options.admin_token;
        options.server_clock = &clock;
        result = rmon::sim::run_fleet(scenario, transport, options);
    }

    nlohmann::json summary = {{"workdir", workdir.string()},
                              {"seed", seed},
                              {"devices", result.devices.size()},
                              {"events", result.events},
                              {"log_digest", result.log_digest},
                              {"generated", result.generated()},
                              {"stored", result.stored()},
                              {"duplicates", result.duplicates()},
                              {"buffered_at_end", result.buffered()},
                              {"crashes", result.crashes()},
                              {"wall_seconds", result.wall_seconds},
                              {"qc", result.qc}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int fsck(std::string const& data, std::string const& study) {
    rmon::Datastore store(data);
    auto const report = store.fsck(study);
    nlohmann::json doc = {{"study_id", study},
                          {"clean", report.clean()},
                          {"corrupted_objects", report.corrupted_objects},
                          {"missing_objects", report.missing_objects},
                          {"corrupted_commits", report.corrupted_commits}};
    std::cout << doc.dump(2) << '\n';
    return report.clean() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmon remote-monitoring platform"};
    app.require_subcommand(1);

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API server");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data = "data";
    std::string server_address;
    serve_cmd->add_option("--host", host, "Bind address");
    serve_cmd->add_option("--port", port, "TCP port (0 picks a free port)");
    serve_cmd->add_option("--data", data, "Datastore root");
    serve_cmd->add_option("--server-address", server_address, "Address embedded in QR payloads");

    auto* fleet_cmd = app.add_subcommand("fleet", "Device fleet simulator");
    fleet_cmd->require_subcommand(1);
    auto* run_cmd = fleet_cmd->add_subcommand("run", "Run a scenario");
    std::string scenario;
    std::optional<std::string> server;
    std::optional<std::uint64_t> seed;
    double speedup = 0.0;
    std::optional<std::string> log_path;
    std::optional<std::string> workdir;
    run_cmd->add_option("--scenario", scenario, "Scenario document")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--server", server, "host:port of a running server; embedded server when omitted");
    run_cmd->add_option("--seed", seed, "Scenario seed override");
    run_cmd->add_option("--speedup", speedup, "Cap on simulated seconds per wall second (0 = unthrottled)")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--log", log_path, "Write the NDJSON event log here");
    run_cmd->add_option("--workdir", workdir, "Device (and embedded server) state directory");

    auto* fsck_cmd = app.add_subcommand("fsck", "Verify a study's datastore");
    std::string fsck_data = "data";
    std::string study;
    fsck_cmd->add_option("--data", fsck_data, "Datastore root");
    fsck_cmd->add_option("--study", study, "Study id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve_cmd->parsed()) return serve(host, port, data, server_address);
        if (run_cmd->parsed()) return fleet_run(scenario, server, seed, speedup, log_path, workdir);
        if (fsck_cmd->parsed()) return fsck(fsck_data, study);
    } catch (rmon::Error const& e) {
        std::cerr << "error: " << rmon::to_string(e.code()) << ": " << e.detail() << '\n';
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
