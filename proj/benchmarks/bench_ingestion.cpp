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

#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "rmon/api/platform.hpp"
#include "rmon/common/digest.hpp"
#include "rmon/common/random.hpp"
#include "scratch_dir.hpp"

namespace {

using namespace rmon;

void BM_SubmitBatch(benchmark::State& state) {
    bench::ScratchDir dir;
    ManualClock clock(parse_instant("2020-07-08T09:00:00Z"));
    PlatformOptions options;
    options.data_root = dir.path() / "data";
    options.server_address = "https://rmon.example.org";
    options.admin_token = "admin";
    Platform platform(options, clock, std::make_unique<SeededSecretSource>(1));
    StudyConfig cfg;
    cfg.study_id = "B";
    cfg.name = "B";
    cfg.duration_days = 84;
    cfg.n_subjects = 1;
    cfg.sensors = {{Sensor::location, 600.0}};
    platform.create_study(cfg);
    auto const token = platform.generate_tokens("B", "s1", 1).front();
    Rng rng(3);
    auto const device = uuid_v4(rng);
    (void)platform.enroll(encode_qr_payload(token), device, false);

    std::string const payload(static_cast<std::size_t>(state.range(0)), '{');
    for (auto _ : state) {
        SensorBatch b;
        b.meta.study_id = "B";
        b.meta.token_id = token.token_id();
        b.meta.device_id = device;
        b.meta.sensor = Sensor::location;
        b.meta.batch_id = uuid_v4(rng);
        b.meta.created_at = clock.now();
        b.payload = payload + b.meta.batch_id;
        b.meta.md5_hex = md5_hex(b.payload);
        benchmark::DoNotOptimize(platform.submit_batch(b, token.secret));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SubmitBatch)->Arg(256)->Arg(16 << 10);

}  // namespace
